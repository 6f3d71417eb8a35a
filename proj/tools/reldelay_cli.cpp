// reldelay: bounds | simulate | kappa | stats

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "reldelay/commands.hpp"
#include "reldelay/config.hpp"
#include "reldelay/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kNumericError = 3, kEstimationError = 4 };

constexpr const char* kOutEnv = "RELDELAY_OUT";

struct FlagBinding {
    CLI::Option* option;
    std::string key;
    std::string value;
};

struct Subcommand {
    CLI::App* app = nullptr;
    std::string config_path;
    std::vector<FlagBinding> flags;
};

void add_flags(Subcommand& sub)
{
    struct Spec {
        const char* flag;
        const char* key;
        const char* help;
    };
    static const Spec specs[] = {
        {"--seed", "seed", "master seed"},
        {"--lambda", "lambda", "single density (sets min = max)"},
        {"--lambda-min", "lambda_min", "first density of the sweep"},
        {"--lambda-max", "lambda_max", "last density of the sweep"},
        {"--lambda-step", "lambda_step", "sweep step"},
        {"--g", "g", "link probability"},
        {"--q", "q", "activation probability (g = q^2)"},
        {"--r0", "r0", "communication range"},
        {"--region", "region", "deployment region WxH"},
        {"--repeats", "repeats", "network draws per density"},
        {"--pairs", "pairs", "random node pairs per draw"},
        {"--trials", "trials", "lattice instances per density (stats)"},
        {"--max-slots", "max_slots", "flooding cap in slots (0 = auto)"},
        {"--n-max", "n_max", "series truncation index (0 = lattice edge count)"},
        {"--tail-tol", "tail_tol", "relative tail tolerance for the series"},
        {"--kappa", "kappa", "hop/distance ratio at lambda_L, or auto"},
        {"--lambda-l", "lambda_L", "long-term critical density, or auto"},
        {"--occupancy", "occupancy", "thinned or raw point set for edge occupancy"},
        {"--kappa-graph", "kappa_graph", "long-term or single-slot graph for kappa"},
        {"--out", "out", "output directory"},
        {"--jobs", "jobs", "worker threads (0 = all cores)"},
        {"--divergence-policy", "divergence_policy", "error or warn"},
    };
    sub.app->add_option("--config", sub.config_path, "key=value configuration file");
    sub.flags.reserve(std::size(specs));
    for (const auto& s : specs) {
        sub.flags.push_back({nullptr, s.key, {}});
        sub.flags.back().option = sub.app->add_option(s.flag, sub.flags.back().value, s.help);
    }
    CLI::Option* g = nullptr;
    CLI::Option* q = nullptr;
    for (auto& f : sub.flags) {
        if (f.key == "g") g = f.option;
        if (f.key == "q") q = f.option;
    }
    g->excludes(q);
}

reldelay::NetworkConfig build_config(const Subcommand& sub)
{
    reldelay::NetworkConfig cfg;
    if (!sub.config_path.empty()) cfg = reldelay::load_config(sub.config_path);
    for (const auto& f : sub.flags) {
        if (f.option->count() > 0) reldelay::apply_setting(cfg, f.key, f.value, 0);
    }
    if (cfg.out_dir.empty()) {
        const char* env = std::getenv(kOutEnv);
        cfg.out_dir = env && *env ? env : "reldelay_out";
    }
    cfg.validate();
    return cfg;
}

int run(const std::string& name, const Subcommand& sub)
{
    const reldelay::NetworkConfig cfg = build_config(sub);
    if (cfg.jobs > 0) omp_set_num_threads(cfg.jobs);

    reldelay::CommandOutput out;
    if (name == "bounds") {
        out = reldelay::cmd_bounds(cfg);
    } else if (name == "simulate") {
        out = reldelay::cmd_simulate(cfg);
    } else if (name == "kappa") {
        out = reldelay::cmd_kappa(cfg);
    } else {
        out = reldelay::cmd_stats(cfg);
    }
    for (const auto& w : out.warnings) std::cerr << w << '\n';
    for (const auto& path : reldelay::write_outputs(out, cfg.out_dir, reldelay::serialize_config(cfg))) {
        std::cout << path << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Relative delay bounds and flooding simulation for duty-cycled wireless networks"};
    app.require_subcommand(1);

    const char* names[] = {"bounds", "simulate", "kappa", "stats"};
    const char* about[] = {
        "analytic bounds over the density sweep",
        "flooding experiment: per-trial delays and per-density summary",
        "estimate kappa (hops per unit distance) at lambda_L",
        "cluster and lattice component statistics",
    };
    std::vector<Subcommand> subs(4);
    for (std::size_t i = 0; i < subs.size(); ++i) {
        subs[i].app = app.add_subcommand(names[i], about[i]);
        add_flags(subs[i]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (subs[i].app->parsed()) return run(names[i], subs[i]);
        }
        return kFailure;
    } catch (const reldelay::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const reldelay::ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const reldelay::DivergentSeriesError& e) {
        std::cerr << "divergence error: " << e.what() << '\n';
        return kNumericError;
    } catch (const reldelay::DomainError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumericError;
    } catch (const reldelay::EstimationError& e) {
        std::cerr << "estimation error: " << e.what() << '\n';
        return kEstimationError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
