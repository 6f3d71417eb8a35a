#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "reldelay/config.hpp"
#include "reldelay/geometry.hpp"

namespace reldelay {

enum class PairCategory : std::uint8_t { XExtremes, YExtremes, Corners, Random };

std::string_view to_string(PairCategory c);

struct NodePair {
    std::uint32_t source = 0;
    std::uint32_t dest = 0;
    PairCategory category = PairCategory::Random;
    friend bool operator==(const NodePair&, const NodePair&) = default;
};

/// Precomputed, read-only data shared by every flood on one point set.
/// Holds a reference to the points; they must outlive the context.
class FloodContext {
public:
    FloodContext(const PointSet& points, double range, double q, std::size_t max_slots);

    const PointSet& points() const noexcept { return *points_; }
    const SpatialGrid& grid() const noexcept { return grid_; }
    double range() const noexcept { return range_; }
    double q() const noexcept { return q_; }
    std::size_t max_slots() const noexcept { return max_slots_; }
    /// Component labels of the long-run graph (all nodes, distance <= range).
    const std::vector<std::int32_t>& longterm_labels() const noexcept { return longterm_; }

private:
    const PointSet* points_;
    SpatialGrid grid_;
    double range_;
    double q_;
    std::size_t max_slots_;
    std::vector<std::int32_t> longterm_;
};

/// Cluster labels for one activity pattern, computed straight from the grid.
std::vector<std::int32_t> slot_cluster_labels(const PointSet& points, const SpatialGrid& grid,
                                              const ActivityMask& active, double range);

struct FloodState {
    ActivityMask informed;
    std::uint64_t slot = 0;  // slots completed
    std::size_t informed_count = 0;
    std::optional<std::uint64_t> delivered_at;  // slot index (1-based) the destination was reached
};

FloodState start_flood(const FloodContext& ctx, std::uint32_t source);

/// Runs the next slot: every cluster holding an informed node becomes informed.
void step_flood(const FloodContext& ctx, FloodState& state, std::uint32_t dest, std::uint64_t seed);

struct DelayTrialResult {
    std::uint32_t source = 0;
    std::uint32_t dest = 0;
    PairCategory category = PairCategory::Random;
    std::optional<std::uint64_t> delay;  // slots; empty on timeout
    double distance = 0.0;
    std::optional<double> relative_delay;
    std::uint64_t slots_run = 0;
    bool unreachable = false;  // no path even in the long-run graph

    bool timed_out() const noexcept { return !delay.has_value(); }
    friend bool operator==(const DelayTrialResult&, const DelayTrialResult&) = default;
};

DelayTrialResult run_flood_trial(const FloodContext& ctx, const NodePair& pair, std::uint64_t seed);
DelayTrialResult run_flood_trial(const NetworkConfig& config, const PointSet& points, std::uint32_t source,
                                 std::uint32_t dest, std::uint64_t seed);

/// x-extremes, y-extremes, corner pair, then n_random random pairs of distinct nodes.
std::vector<NodePair> select_pairs(const PointSet& points, std::size_t n_random, std::uint64_t seed);

struct KappaEstimate {
    double kappa_hat = 0.0;
    std::size_t samples = 0;
    std::size_t unreachable = 0;
    std::vector<double> distances;
    std::vector<int> hops;
};

/// Mean of hops / distance over the reachable pairs with positive distance.
KappaEstimate estimate_kappa_on(const InstantaneousGraph& graph, const PointSet& points,
                                const std::vector<NodePair>& pairs);

/// Samples `repeats` networks at density lambda_L and pools the pair ratios.
KappaEstimate estimate_kappa(const NetworkConfig& config, std::size_t n_pairs, std::size_t repeats,
                             std::uint64_t seed);

/// One flood to run: which point set, which pair, which seed.
struct TrialTask {
    std::size_t context = 0;
    std::size_t repeat = 0;
    NodePair pair;
    std::uint64_t seed = 0;
};

/// OpenMP batch runner; results are stored by task index.
std::vector<DelayTrialResult> run_trials(const std::vector<FloodContext>& contexts,
                                         const std::vector<TrialTask>& tasks);
/// Serial reference for run_trials.
std::vector<DelayTrialResult> run_trials_serial(const std::vector<FloodContext>& contexts,
                                                const std::vector<TrialTask>& tasks);

struct TrialRecord {
    std::uint64_t seed = 0;
    std::size_t repeat = 0;
    double lambda = 0.0;
    DelayTrialResult result;
};

struct CategoryStats {
    std::size_t trials = 0;
    std::size_t delivered = 0;
    double mean_gamma = 0.0;
};

struct GammaSummary {
    double lambda = 0.0;
    std::size_t trials = 0;
    std::size_t delivered = 0;
    std::size_t timeouts = 0;
    double mean_gamma = 0.0;  // over delivered trials
    double timeout_rate = 0.0;
    CategoryStats by_category[4];
    std::size_t first_slot_percolated = 0;  // repeats whose slot-1 graph spans the region
};

struct GammaExperiment {
    std::vector<GammaSummary> summaries;
    std::vector<TrialRecord> records;
};

/// Flooding experiment over the configured lambda sweep.
GammaExperiment gamma_experiment(const NetworkConfig& config, const std::vector<double>& lambdas,
                                 std::size_t repeats, std::uint64_t seed, bool parallel = true);

struct StatsRow {
    double lambda = 0.0;
    std::size_t trials = 0;
    double mean_clusters = 0.0;
    double mean_components = 0.0;
    double mean_cluster_nodes = 0.0;        // nodes per cluster
    double mean_cluster_size = 0.0;         // vertices of the mapped component
    double mean_component_size = 0.0;
    double edge_weighted_size = 0.0;        // size of the component holding an interior edge, 0 if unoccupied
    double mean_cluster_diameter = 0.0;     // horizontal extent / r0
    double mean_mapped_diameter = 0.0;      // diameter of the mapped component
    double mean_component_diameter = 0.0;
    std::size_t straddling_clusters = 0;    // clusters touching several components
    std::size_t clusters_total = 0;
    double occupied_fraction = 0.0;         // interior edges
    double expected_size_upper = 0.0;
    double expected_diameter_upper = 0.0;
    bool bounds_converged = false;
};

struct SizePdfRow {
    double lambda = 0.0;
    std::size_t size = 0;
    double cluster_pdf = 0.0;    // by mapped-component vertex count
    double component_pdf = 0.0;
};

struct ComponentStatistics {
    std::vector<StatsRow> rows;
    std::vector<SizePdfRow> size_pdf;
};

ComponentStatistics component_statistics(const NetworkConfig& config, const std::vector<double>& lambdas,
                                         std::size_t trials, std::uint64_t seed);

}  // namespace reldelay
