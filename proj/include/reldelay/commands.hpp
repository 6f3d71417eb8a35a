#pragma once

#include "reldelay/config.hpp"
#include "reldelay/report.hpp"

namespace reldelay {

// Each command renders its files in memory; the CLI writes them out.
// Rendering is a pure function of the config, so outputs are byte-identical
// across runs and thread counts.

/// bounds.csv and bounds.json over the lambda sweep.
/// Throws DivergentSeriesError (naming lambda and p) under the error policy.
CommandOutput cmd_bounds(const NetworkConfig& config);

/// trials.csv, summary.csv and summary.json from the flooding experiment.
CommandOutput cmd_simulate(const NetworkConfig& config);

/// kappa.json at density lambda_L.
CommandOutput cmd_kappa(const NetworkConfig& config);

/// stats.csv and size_pdf.csv from the lattice coupling.
CommandOutput cmd_stats(const NetworkConfig& config);

}  // namespace reldelay
