#include "reldelay/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "reldelay/errors.hpp"
#include "reldelay/lattice.hpp"
#include "reldelay/random.hpp"
#include "reldelay/union_find.hpp"

namespace reldelay {

namespace {

constexpr std::uint64_t kKappaTag = 0x4b;

std::size_t category_index(PairCategory c)
{
    return static_cast<std::size_t>(c);
}

std::uint32_t argbest(const PointSet& points, auto&& better)
{
    std::uint32_t best = 0;
    for (std::uint32_t i = 1; i < points.size(); ++i) {
        if (better(points.positions[i], points.positions[best])) best = i;
    }
    return best;
}

double mean_or_zero(double sum, std::size_t count)
{
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

}  // namespace

std::string_view to_string(PairCategory c)
{
    switch (c) {
    case PairCategory::XExtremes: return "x-extremes";
    case PairCategory::YExtremes: return "y-extremes";
    case PairCategory::Corners: return "corners";
    case PairCategory::Random: return "random";
    }
    return "unknown";
}

std::vector<std::int32_t> slot_cluster_labels(const PointSet& points, const SpatialGrid& grid,
                                              const ActivityMask& active, double range)
{
    const std::size_t n = points.size();
    const double r2 = range * range;
    DisjointSet dsu(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        const Point p = points.positions[i];
        grid.for_each_near(p, [&](std::uint32_t j) {
            if (j > i && active[j] && squared_distance(p, points.positions[j]) <= r2) dsu.unite(i, j);
        });
    }
    std::vector<std::int32_t> labels(n, -1);
    std::vector<std::int32_t> root_label(n, -1);
    std::int32_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        const std::size_t root = dsu.find(i);
        if (root_label[root] < 0) root_label[root] = next++;
        labels[i] = root_label[root];
    }
    return labels;
}

FloodContext::FloodContext(const PointSet& points, double range, double q, std::size_t max_slots)
    : points_(&points), grid_(points, range), range_(range), q_(q), max_slots_(max_slots)
{
    if (!(range > 0.0)) throw ParameterError("flood: range must be positive");
    if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("flood: activation probability must lie in [0, 1]");
    longterm_ = slot_cluster_labels(points, grid_, all_active(points), range);
}

FloodState start_flood(const FloodContext& ctx, std::uint32_t source)
{
    if (source >= ctx.points().size()) throw ParameterError("flood: source out of range");
    FloodState state;
    state.informed.assign(ctx.points().size(), 0);
    state.informed[source] = 1;
    state.informed_count = 1;
    return state;
}

void step_flood(const FloodContext& ctx, FloodState& state, std::uint32_t dest, std::uint64_t seed)
{
    const std::uint64_t slot = ++state.slot;
    const ActivityMask active = activate(ctx.points(), ctx.q(), slot, seed);
    const auto labels = slot_cluster_labels(ctx.points(), ctx.grid(), active, ctx.range());

    std::int32_t count = 0;
    for (auto l : labels) count = std::max(count, l + 1);
    std::vector<std::uint8_t> carrying(static_cast<std::size_t>(count), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (state.informed[i] && labels[i] >= 0) carrying[labels[i]] = 1;
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= 0 && carrying[labels[i]] && !state.informed[i]) {
            state.informed[i] = 1;
            ++state.informed_count;
        }
    }
    if (!state.delivered_at && state.informed[dest]) state.delivered_at = slot;
}

DelayTrialResult run_flood_trial(const FloodContext& ctx, const NodePair& pair, std::uint64_t seed)
{
    const PointSet& points = ctx.points();
    if (pair.source >= points.size() || pair.dest >= points.size()) {
        throw ParameterError("flood trial: node index out of range");
    }
    DelayTrialResult r;
    r.source = pair.source;
    r.dest = pair.dest;
    r.category = pair.category;
    r.distance = distance(points.positions[pair.source], points.positions[pair.dest]);

    if (pair.source == pair.dest) {
        r.delay = 0;
        r.relative_delay = 0.0;
        return r;
    }
    const auto& lt = ctx.longterm_labels();
    if (lt[pair.source] != lt[pair.dest]) {
        r.unreachable = true;
        return r;
    }

    FloodState state = start_flood(ctx, pair.source);
    while (state.slot < ctx.max_slots()) {
        step_flood(ctx, state, pair.dest, seed);
        if (state.delivered_at) break;
    }
    r.slots_run = state.slot;
    if (state.delivered_at) {
        r.delay = *state.delivered_at - 1;
        r.relative_delay = r.distance > 0.0 ? static_cast<double>(*r.delay) / r.distance : 0.0;
    }
    return r;
}

DelayTrialResult run_flood_trial(const NetworkConfig& config, const PointSet& points, std::uint32_t source,
                                 std::uint32_t dest, std::uint64_t seed)
{
    const FloodContext ctx(points, config.r0, config.q(), config.resolved_max_slots());
    return run_flood_trial(ctx, NodePair{source, dest, PairCategory::Random}, seed);
}

std::vector<NodePair> select_pairs(const PointSet& points, std::size_t n_random, std::uint64_t seed)
{
    if (points.size() < 2) throw ParameterError("select_pairs: need at least two nodes");

    const Region& r = points.region;
    const Point low_corner = r.origin;
    const Point high_corner{r.origin.x + r.width, r.origin.y + r.height};

    std::vector<NodePair> pairs;
    pairs.reserve(n_random + 3);
    pairs.push_back({argbest(points, [](Point a, Point b) { return a.x < b.x; }),
                     argbest(points, [](Point a, Point b) { return a.x > b.x; }), PairCategory::XExtremes});
    pairs.push_back({argbest(points, [](Point a, Point b) { return a.y < b.y; }),
                     argbest(points, [](Point a, Point b) { return a.y > b.y; }), PairCategory::YExtremes});
    pairs.push_back({argbest(points,
                             [&](Point a, Point b) {
                                 return squared_distance(a, low_corner) < squared_distance(b, low_corner);
                             }),
                     argbest(points,
                             [&](Point a, Point b) {
                                 return squared_distance(a, high_corner) < squared_distance(b, high_corner);
                             }),
                     PairCategory::Corners});

    const auto n = static_cast<std::uint64_t>(points.size());
    std::set<std::pair<std::uint32_t, std::uint32_t>> used;
    constexpr std::uint64_t max_attempts = 64;
    for (std::uint64_t k = 0; k < n_random; ++k) {
        NodePair pick{0, 0, PairCategory::Random};
        for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
            const auto u = static_cast<std::uint32_t>(rng::hash(seed, rng::Stream::PairSelection, k, attempt, 0) % n);
            auto v = static_cast<std::uint32_t>(rng::hash(seed, rng::Stream::PairSelection, k, attempt, 1) % (n - 1));
            if (v >= u) ++v;
            pick.source = u;
            pick.dest = v;
            if (used.emplace(std::min(u, v), std::max(u, v)).second) break;
        }
        pairs.push_back(pick);
    }
    return pairs;
}

KappaEstimate estimate_kappa_on(const InstantaneousGraph& graph, const PointSet& points,
                                const std::vector<NodePair>& pairs)
{
    KappaEstimate est;
    double sum = 0.0;
    for (const auto& pair : pairs) {
        const double d = distance(points.positions[pair.source], points.positions[pair.dest]);
        if (pair.source == pair.dest || d == 0.0) continue;
        const auto hops = shortest_path_hops(graph, pair.source, pair.dest);
        if (!hops) {
            ++est.unreachable;
            continue;
        }
        est.distances.push_back(d);
        est.hops.push_back(*hops);
        sum += static_cast<double>(*hops) / d;
    }
    est.samples = est.hops.size();
    if (est.samples == 0) throw EstimationError("kappa estimate: no reachable pair among the sampled pairs");
    est.kappa_hat = sum / static_cast<double>(est.samples);
    return est;
}

KappaEstimate estimate_kappa(const NetworkConfig& config, std::size_t n_pairs, std::size_t repeats,
                             std::uint64_t seed)
{
    const double lambda_L = config.resolved_lambda_L();
    KappaEstimate pooled;
    double sum = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
        const PointSet points = sample_ppp(lambda_L, config.region, rng::derive(seed, kKappaTag, r, 1));
        if (points.size() < 2) continue;
        const ActivityMask active = config.kappa_graph == KappaGraph::LongTerm
                                        ? all_active(points)
                                        : activate(points, config.q(), 1, rng::derive(seed, kKappaTag, r, 3));
        const auto graph = build_instantaneous_graph(points, active, config.r0);
        const auto pairs = select_pairs(points, n_pairs, rng::derive(seed, kKappaTag, r, 2));
        for (const auto& pair : pairs) {
            const double d = distance(points.positions[pair.source], points.positions[pair.dest]);
            if (d == 0.0) continue;
            const auto hops = shortest_path_hops(graph, pair.source, pair.dest);
            if (!hops) {
                ++pooled.unreachable;
                continue;
            }
            pooled.distances.push_back(d);
            pooled.hops.push_back(*hops);
            sum += static_cast<double>(*hops) / d;
        }
    }
    pooled.samples = pooled.hops.size();
    if (pooled.samples == 0) throw EstimationError("kappa estimate: every sampled pair was unreachable");
    pooled.kappa_hat = sum / static_cast<double>(pooled.samples);
    return pooled;
}

std::vector<DelayTrialResult> run_trials(const std::vector<FloodContext>& contexts,
                                         const std::vector<TrialTask>& tasks)
{
    std::vector<DelayTrialResult> out(tasks.size());
    const auto n = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        const TrialTask& t = tasks[i];
        out[i] = run_flood_trial(contexts[t.context], t.pair, t.seed);
    }
    return out;
}

std::vector<DelayTrialResult> run_trials_serial(const std::vector<FloodContext>& contexts,
                                                const std::vector<TrialTask>& tasks)
{
    std::vector<DelayTrialResult> out;
    out.reserve(tasks.size());
    for (const TrialTask& t : tasks) out.push_back(run_flood_trial(contexts[t.context], t.pair, t.seed));
    return out;
}

GammaExperiment gamma_experiment(const NetworkConfig& config, const std::vector<double>& lambdas,
                                 std::size_t repeats, std::uint64_t seed, bool parallel)
{
    if (repeats < 1) throw ParameterError("gamma experiment: repeats must be at least 1");
    const std::size_t max_slots = config.resolved_max_slots();
    GammaExperiment exp;

    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        const double lambda = lambdas[li];
        std::vector<PointSet> networks;
        networks.reserve(repeats);
        for (std::size_t r = 0; r < repeats; ++r) {
            const std::uint64_t draw = config.redraw ? r : 0;
            networks.push_back(sample_ppp(lambda, config.region, rng::derive(seed, li, draw, 1)));
        }

        std::vector<FloodContext> contexts;
        contexts.reserve(repeats);
        std::vector<TrialTask> tasks;
        GammaSummary summary;
        summary.lambda = lambda;
        for (std::size_t r = 0; r < repeats; ++r) {
            contexts.emplace_back(networks[r], config.r0, config.q(), max_slots);
            const PointSet& points = networks[r];
            if (points.size() < 2) continue;

            const ActivityMask first = activate(points, config.q(), 1, rng::derive(seed, li, r, 4));
            if (detect_percolation(build_instantaneous_graph(points, first, config.r0, 1), points)) {
                ++summary.first_slot_percolated;
            }
            const auto pairs = select_pairs(points, config.n_random_pairs, rng::derive(seed, li, r, 2));
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                tasks.push_back({r, r, pairs[k], rng::derive(rng::derive(seed, li, r, 3), k)});
            }
        }

        const auto results = parallel ? run_trials(contexts, tasks) : run_trials_serial(contexts, tasks);

        double gamma_sum = 0.0;
        double cat_sum[4] = {0.0, 0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& res = results[i];
            auto& cat = summary.by_category[category_index(res.category)];
            ++summary.trials;
            ++cat.trials;
            if (res.relative_delay) {
                ++summary.delivered;
                ++cat.delivered;
                gamma_sum += *res.relative_delay;
                cat_sum[category_index(res.category)] += *res.relative_delay;
            } else {
                ++summary.timeouts;
            }
            exp.records.push_back({tasks[i].seed, tasks[i].repeat, lambda, res});
        }
        summary.mean_gamma = mean_or_zero(gamma_sum, summary.delivered);
        summary.timeout_rate = summary.trials == 0 ? 0.0
                                                   : static_cast<double>(summary.timeouts) /
                                                         static_cast<double>(summary.trials);
        for (std::size_t c = 0; c < 4; ++c) {
            summary.by_category[c].mean_gamma = mean_or_zero(cat_sum[c], summary.by_category[c].delivered);
        }
        exp.summaries.push_back(summary);
    }
    return exp;
}

namespace {

struct TrialStats {
    std::size_t clusters = 0;
    std::size_t components = 0;
    std::size_t cluster_nodes = 0;
    std::size_t cluster_size = 0;
    std::size_t component_size = 0;
    double cluster_diameter = 0.0;
    double mapped_diameter = 0.0;
    double component_diameter = 0.0;
    std::size_t straddling = 0;
    double occupied_fraction = 0.0;
    double edge_weighted_size = 0.0;
    std::map<std::size_t, std::size_t> cluster_hist;
    std::map<std::size_t, std::size_t> component_hist;
};

TrialStats lattice_trial(const NetworkConfig& config, const Lattice& lattice, double lambda, std::uint64_t seed)
{
    TrialStats s;
    const PointSet points = sample_ppp(lambda, config.region, rng::derive(seed, 1));
    const ActivityMask active = activate(points, config.q(), 1, rng::derive(seed, 2));
    const auto graph = build_instantaneous_graph(points, active, config.r0, 1);
    const auto cl = clusters(graph);
    const auto occ = occupy_edges(lattice, points,
                                  config.occupancy == OccupancySource::Thinned ? active : all_active(points));
    const auto comps = connected_components(occ);

    s.clusters = cl.size();
    s.components = comps.components.size();
    s.occupied_fraction = interior_occupied_fraction(occ);
    const auto pmf = component_size_pmf_per_edge(comps, lattice, lattice.vertex_count());
    for (std::size_t n = 2; n < pmf.size(); ++n) s.edge_weighted_size += static_cast<double>(n) * pmf[n];
    for (const auto& c : comps.components) {
        s.component_size += c.size;
        s.component_diameter += static_cast<double>(c.diameter);
        ++s.component_hist[c.size];
    }
    for (const auto& c : cl) {
        const auto candidates = cluster_component_candidates(c, points, occ, comps);
        if (candidates.empty()) continue;
        if (candidates.size() > 1) ++s.straddling;
        // Straddling clusters are attributed to their largest component.
        const auto best = *std::max_element(candidates.begin(), candidates.end(), [&](auto a, auto b) {
            return comps.components[a].size < comps.components[b].size;
        });
        const auto& comp = comps.components[best];
        s.cluster_nodes += c.size();
        s.cluster_size += comp.size;
        s.mapped_diameter += static_cast<double>(comp.diameter);
        s.cluster_diameter += cluster_extent_x(c, points) / config.r0;
        ++s.cluster_hist[comp.size];
    }
    return s;
}

}  // namespace

ComponentStatistics component_statistics(const NetworkConfig& config, const std::vector<double>& lambdas,
                                         std::size_t trials, std::uint64_t seed)
{
    if (trials < 1) throw ParameterError("component statistics: trials must be at least 1");
    const Lattice lattice = build_lattice(config.region, config.r0);
    SeriesControl series = config.series_control();
    series.policy = DivergencePolicy::WarnAndTruncate;

    ComponentStatistics out;
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        const double lambda = lambdas[li];
        std::vector<TrialStats> per_trial(trials);
        const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t t = 0; t < n; ++t) {
            per_trial[t] = lattice_trial(config, lattice, lambda, rng::derive(seed, li, static_cast<std::uint64_t>(t)));
        }

        StatsRow row;
        row.lambda = lambda;
        row.trials = trials;
        std::size_t clusters = 0, components = 0, cluster_nodes = 0, cluster_size = 0, component_size = 0;
        double cluster_diam = 0.0, mapped_diam = 0.0, comp_diam = 0.0, occupied = 0.0, edge_weighted = 0.0;
        std::size_t mapped_clusters = 0;
        std::map<std::size_t, std::size_t> cluster_hist, component_hist;
        for (const auto& s : per_trial) {
            clusters += s.clusters;
            components += s.components;
            cluster_nodes += s.cluster_nodes;
            cluster_size += s.cluster_size;
            component_size += s.component_size;
            cluster_diam += s.cluster_diameter;
            mapped_diam += s.mapped_diameter;
            comp_diam += s.component_diameter;
            occupied += s.occupied_fraction;
            edge_weighted += s.edge_weighted_size;
            row.straddling_clusters += s.straddling;
            for (const auto& [k, v] : s.cluster_hist) {
                cluster_hist[k] += v;
                mapped_clusters += v;
            }
            for (const auto& [k, v] : s.component_hist) component_hist[k] += v;
        }
        row.clusters_total = clusters;
        row.mean_clusters = mean_or_zero(static_cast<double>(clusters), trials);
        row.mean_components = mean_or_zero(static_cast<double>(components), trials);
        row.mean_cluster_nodes = mean_or_zero(static_cast<double>(cluster_nodes), mapped_clusters);
        row.mean_cluster_size = mean_or_zero(static_cast<double>(cluster_size), mapped_clusters);
        row.mean_component_size = mean_or_zero(static_cast<double>(component_size), components);
        row.mean_cluster_diameter = mean_or_zero(cluster_diam, mapped_clusters);
        row.mean_mapped_diameter = mean_or_zero(mapped_diam, mapped_clusters);
        row.mean_component_diameter = mean_or_zero(comp_diam, components);
        row.occupied_fraction = occupied / static_cast<double>(trials);
        row.edge_weighted_size = edge_weighted / static_cast<double>(trials);

        if (config.g > 0.0) {
            const auto bounds = evaluate_bounds(config.model(lambda), series);
            row.expected_size_upper = bounds.expected_size_upper.value;
            row.expected_diameter_upper = bounds.expected_diameter_upper.value;
            row.bounds_converged = bounds.converged;
        }
        if (lambda == 0.0) {
            // Nothing deployed: report an all-zero row rather than the n = 1 series floor.
            row.expected_size_upper = 0.0;
            row.expected_diameter_upper = 0.0;
        }
        out.rows.push_back(row);

        std::set<std::size_t> sizes;
        for (const auto& [k, v] : cluster_hist) sizes.insert(k);
        for (const auto& [k, v] : component_hist) sizes.insert(k);
        for (auto size : sizes) {
            SizePdfRow pdf;
            pdf.lambda = lambda;
            pdf.size = size;
            pdf.cluster_pdf = mean_or_zero(static_cast<double>(cluster_hist[size]), mapped_clusters);
            pdf.component_pdf = mean_or_zero(static_cast<double>(component_hist[size]), components);
            out.size_pdf.push_back(pdf);
        }
    }
    return out;
}

}  // namespace reldelay
