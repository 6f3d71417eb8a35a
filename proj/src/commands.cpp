#include "reldelay/commands.hpp"

#include <cstdio>
#include <optional>
#include <string>

#include "json.hpp"
#include "reldelay/bounds.hpp"
#include "reldelay/errors.hpp"
#include "reldelay/simulator.hpp"

namespace reldelay {

namespace {

using json = nlohmann::ordered_json;

std::string flag(bool b) { return b ? "1" : "0"; }

std::string count(std::size_t n) { return std::to_string(n); }

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string lambda_label(double lambda)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "lambda=%.6g", lambda);
    return buf;
}

BoundsReport bounds_at(const NetworkConfig& config, double lambda, const SeriesControl& control)
{
    try {
        return evaluate_bounds(config.model(lambda), control);
    } catch (const DivergentSeriesError& e) {
        throw DivergentSeriesError(lambda_label(lambda) + ": " + e.what());
    }
}

json config_json(const NetworkConfig& c)
{
    json j;
    j["g"] = c.g;
    j["q"] = c.q();
    j["r0"] = c.r0;
    j["region"] = {c.region.width, c.region.height};
    j["seed"] = c.seed;
    j["lambda_L"] = c.resolved_lambda_L();
    j["kappa"] = c.resolved_kappa();
    return j;
}

}  // namespace

CommandOutput cmd_bounds(const NetworkConfig& config)
{
    config.validate();
    const SeriesControl control = config.series_control();
    CommandOutput out;
    out.command = "bounds";

    CsvTable csv({"lambda", "g", "r0", "p", "E_size_upper", "E_diam_upper", "gamma_lower", "gamma_upper",
                  "wang_gamma_upper", "converged_flag", "n_max"});
    json rows = json::array();
    for (double lambda : config.lambdas()) {
        const BoundsReport rep = bounds_at(config, lambda, control);
        csv.add_row({format_number(lambda), format_number(config.g), format_number(config.r0), format_number(rep.p),
                     format_number(rep.expected_size_upper.value), format_number(rep.expected_diameter_upper.value),
                     format_number(rep.gamma_lower), format_number(rep.gamma_upper),
                     optional_number(rep.wang_gamma_upper), flag(rep.converged), count(control.n_max)});
        if (!rep.converged) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "warning: %s: bound series diverge (p=%.6g >= 1/3); values are partial sums to n=%zu",
                          lambda_label(lambda).c_str(), rep.p, control.n_max);
            out.warnings.emplace_back(buf);
        }

        json r;
        r["lambda"] = lambda;
        r["p"] = rep.p;
        r["E_size_upper"] = rep.expected_size_upper.value;
        r["E_size_terms"] = rep.expected_size_upper.terms;
        r["E_size_tail_met"] = rep.expected_size_upper.tail_met;
        r["E_diam_upper"] = rep.expected_diameter_upper.value;
        r["E_diam_terms"] = rep.expected_diameter_upper.terms;
        r["E_diam_tail_met"] = rep.expected_diameter_upper.tail_met;
        r["decay_exponent"] = rep.expected_size_upper.decay_exponent;
        r["gamma_lower"] = rep.gamma_lower;
        r["expected_link_delay"] = rep.expected_link_delay;
        r["gamma_upper"] = rep.gamma_upper;
        r["wang_size_approx"] = optional_json(rep.wang_size_approx);
        r["wang_gamma_upper"] = optional_json(rep.wang_gamma_upper);
        r["converged"] = rep.converged;
        r["notes"] = rep.notes;
        rows.push_back(r);
    }

    json doc;
    doc["manifest"] = kManifestFile;
    doc["config"] = config_json(config);
    doc["n_max"] = control.n_max;
    doc["tail_tol"] = control.tail_tol;
    doc["divergence_policy"] = control.policy == DivergencePolicy::Error ? "error" : "warn";
    doc["rows"] = rows;
    out.files.push_back({"bounds.csv", csv.str()});
    out.files.push_back({"bounds.json", doc.dump(2) + "\n"});
    return out;
}

CommandOutput cmd_simulate(const NetworkConfig& config)
{
    config.validate();
    CommandOutput out;
    out.command = "simulate";
    const auto lambdas = config.lambdas();
    const GammaExperiment exp = gamma_experiment(config, lambdas, config.repeats, config.seed);

    CsvTable trials({"seed", "repeat", "lambda", "pair_category", "source", "dest", "distance", "delay_slots",
                     "relative_delay", "timeout_flag"});
    for (const auto& rec : exp.records) {
        const auto& r = rec.result;
        trials.add_row({std::to_string(rec.seed), count(rec.repeat), format_number(rec.lambda),
                        std::string(to_string(r.category)), std::to_string(r.source), std::to_string(r.dest),
                        format_number(r.distance), r.delay ? std::to_string(*r.delay) : "",
                        optional_number(r.relative_delay), flag(r.timed_out())});
    }

    // Bound columns are informational here, so divergence only sets the flag.
    SeriesControl control = config.series_control();
    control.policy = DivergencePolicy::WarnAndTruncate;

    CsvTable summary({"lambda", "trials", "delivered", "timeouts", "timeout_rate", "mean_gamma", "gamma_lower",
                      "gamma_upper", "wang_gamma_upper", "converged_flag", "first_slot_percolated",
                      "mean_gamma_x_extremes", "mean_gamma_y_extremes", "mean_gamma_corners", "mean_gamma_random"});
    json rows = json::array();
    for (const auto& s : exp.summaries) {
        const BoundsReport rep = evaluate_bounds(config.model(s.lambda), control);
        auto cat_mean = [&](std::size_t c) -> std::optional<double> {
            const auto& cs = s.by_category[c];
            if (cs.delivered == 0) return std::nullopt;
            return cs.mean_gamma;
        };
        const std::optional<double> mean = s.delivered ? std::optional<double>(s.mean_gamma) : std::nullopt;
        summary.add_row({format_number(s.lambda), count(s.trials), count(s.delivered), count(s.timeouts),
                         format_number(s.timeout_rate), optional_number(mean), format_number(rep.gamma_lower),
                         format_number(rep.gamma_upper), optional_number(rep.wang_gamma_upper), flag(rep.converged),
                         count(s.first_slot_percolated), optional_number(cat_mean(0)), optional_number(cat_mean(1)),
                         optional_number(cat_mean(2)), optional_number(cat_mean(3))});

        json r;
        r["lambda"] = s.lambda;
        r["trials"] = s.trials;
        r["delivered"] = s.delivered;
        r["timeouts"] = s.timeouts;
        r["timeout_rate"] = s.timeout_rate;
        r["mean_gamma"] = s.delivered ? json(s.mean_gamma) : json(nullptr);
        r["gamma_lower"] = rep.gamma_lower;
        r["gamma_upper"] = rep.gamma_upper;
        r["wang_gamma_upper"] = optional_json(rep.wang_gamma_upper);
        r["converged"] = rep.converged;
        r["first_slot_percolated"] = s.first_slot_percolated;
        json cats;
        for (std::size_t c = 0; c < 4; ++c) {
            const auto name = std::string(to_string(static_cast<PairCategory>(c)));
            cats[name] = {{"trials", s.by_category[c].trials},
                          {"delivered", s.by_category[c].delivered},
                          {"mean_gamma", optional_json(cat_mean(c))}};
        }
        r["by_category"] = cats;
        rows.push_back(r);
    }

    json doc;
    doc["manifest"] = kManifestFile;
    doc["config"] = config_json(config);
    doc["repeats"] = config.repeats;
    doc["random_pairs"] = config.n_random_pairs;
    doc["max_slots"] = config.resolved_max_slots();
    doc["summaries"] = rows;
    out.files.push_back({"trials.csv", trials.str()});
    out.files.push_back({"summary.csv", summary.str()});
    out.files.push_back({"summary.json", doc.dump(2) + "\n"});
    return out;
}

CommandOutput cmd_kappa(const NetworkConfig& config)
{
    config.validate();
    CommandOutput out;
    out.command = "kappa";
    const KappaEstimate est = estimate_kappa(config, config.n_random_pairs, config.repeats, config.seed);

    json samples = json::array();
    for (std::size_t i = 0; i < est.samples; ++i) {
        samples.push_back({{"distance", est.distances[i]},
                           {"hops", est.hops[i]},
                           {"ratio", static_cast<double>(est.hops[i]) / est.distances[i]}});
    }
    json doc;
    doc["manifest"] = kManifestFile;
    doc["config"] = config_json(config);
    doc["lambda"] = config.resolved_lambda_L();
    doc["graph"] = config.kappa_graph == KappaGraph::LongTerm ? "long-term" : "single-slot";
    doc["repeats"] = config.repeats;
    doc["pairs_per_repeat"] = config.n_random_pairs + 3;
    doc["kappa_hat"] = est.kappa_hat;
    doc["samples"] = est.samples;
    doc["unreachable"] = est.unreachable;
    doc["pairs"] = samples;
    out.files.push_back({"kappa.json", doc.dump(2) + "\n"});
    return out;
}

CommandOutput cmd_stats(const NetworkConfig& config)
{
    config.validate();
    CommandOutput out;
    out.command = "stats";
    const auto stats = component_statistics(config, config.lambdas(), config.trials, config.seed);

    CsvTable table({"seed", "lambda", "g", "trials", "mean_clusters", "mean_components", "mean_cluster_nodes",
                    "mean_cluster_size", "mean_component_size", "edge_weighted_size", "mean_cluster_diameter", "mean_mapped_diameter",
                    "mean_component_diameter", "straddling_clusters", "clusters_total", "occupied_fraction",
                    "E_size_upper", "E_diam_upper", "converged_flag"});
    for (const auto& r : stats.rows) {
        table.add_row({std::to_string(config.seed), format_number(r.lambda), format_number(config.g), count(r.trials),
                       format_number(r.mean_clusters), format_number(r.mean_components),
                       format_number(r.mean_cluster_nodes), format_number(r.mean_cluster_size),
                       format_number(r.mean_component_size), format_number(r.edge_weighted_size),
                       format_number(r.mean_cluster_diameter),
                       format_number(r.mean_mapped_diameter), format_number(r.mean_component_diameter),
                       count(r.straddling_clusters), count(r.clusters_total), format_number(r.occupied_fraction),
                       format_number(r.expected_size_upper), format_number(r.expected_diameter_upper),
                       flag(r.bounds_converged)});
        if (r.straddling_clusters > 0) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "note: %s: %zu of %zu clusters straddle several lattice components",
                          lambda_label(r.lambda).c_str(), r.straddling_clusters, r.clusters_total);
            out.warnings.emplace_back(buf);
        }
    }
    CsvTable pdf({"seed", "lambda", "g", "size", "cluster_pdf", "component_pdf"});
    for (const auto& r : stats.size_pdf) {
        pdf.add_row({std::to_string(config.seed), format_number(r.lambda), format_number(config.g), count(r.size),
                     format_number(r.cluster_pdf), format_number(r.component_pdf)});
    }
    out.files.push_back({"stats.csv", table.str()});
    out.files.push_back({"size_pdf.csv", pdf.str()});
    return out;
}

}  // namespace reldelay
