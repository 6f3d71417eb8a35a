#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reldelay/bounds.hpp"
#include "reldelay/geometry.hpp"

namespace reldelay {

/// Malformed configuration text or flag value. Carries the offending line
/// (0 for command-line values) and field name.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, std::string field, const std::string& message);
    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

enum class OccupancySource { Thinned, Raw };
enum class KappaGraph { LongTerm, SingleSlot };

struct NetworkConfig {
    double lambda_min = 1.4;
    double lambda_max = 2.8;
    double lambda_step = 0.2;
    double g = 0.25;
    double r0 = 1.0;
    Region region{20.0, 20.0, {0.0, 0.0}};
    std::size_t max_slots = 0;  // 0 selects the automatic cap
    std::size_t n_random_pairs = 100;
    std::size_t repeats = 10;
    std::size_t trials = 200;  // lattice statistics instances per lambda
    std::uint64_t seed = 1;
    std::size_t n_max = 0;  // 0 selects the lattice edge count
    double tail_tol = 1e-9;
    DivergencePolicy divergence_policy = DivergencePolicy::WarnAndTruncate;
    std::optional<double> kappa;
    std::optional<double> lambda_L;
    OccupancySource occupancy = OccupancySource::Thinned;
    KappaGraph kappa_graph = KappaGraph::LongTerm;
    bool redraw = true;  // fresh point set per repeat
    int jobs = 0;        // 0 = all cores
    std::string out_dir;

    double q() const;
    double resolved_lambda_L() const;
    double resolved_kappa() const;
    std::vector<double> lambdas() const;
    ModelParams model(double lambda) const;
    SeriesControl series_control() const;
    std::size_t resolved_max_slots() const;
    void validate() const;

    friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Evenly spaced sweep from lo to hi inclusive.
std::vector<double> lambda_sweep(double lo, double hi, double step);

/// Applies one key=value setting. `line` is only used for diagnostics.
void apply_setting(NetworkConfig& cfg, const std::string& key, const std::string& value, std::size_t line = 0);

/// Parses the flat key=value format ('#' starts a comment).
NetworkConfig parse_config(const std::string& text, NetworkConfig base = {});
NetworkConfig load_config(const std::string& path, NetworkConfig base = {});

/// Writes every field in key=value form; parse_config round-trips it exactly.
std::string serialize_config(const NetworkConfig& cfg);

}  // namespace reldelay
