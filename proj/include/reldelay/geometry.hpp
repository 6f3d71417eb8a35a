#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace reldelay {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(Point a, Point b) noexcept
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

double distance(Point a, Point b) noexcept;

/// Axis-aligned deployment area.
struct Region {
    double width = 20.0;
    double height = 20.0;
    Point origin{};

    double area() const noexcept { return width * height; }
    bool contains(Point p) const noexcept;
    void validate() const;

    friend bool operator==(const Region&, const Region&) = default;
};

/// Node positions of one network realisation.
struct PointSet {
    std::vector<Point> positions;
    Region region;
    double density = 0.0;  // nodes per unit area

    std::size_t size() const noexcept { return positions.size(); }
    bool empty() const noexcept { return positions.empty(); }

    friend bool operator==(const PointSet&, const PointSet&) = default;
};

using ActivityMask = std::vector<std::uint8_t>;

/// Undirected graph of the nodes that are active in one slot, stored as
/// compressed adjacency rows sorted by neighbour index.
class InstantaneousGraph {
public:
    InstantaneousGraph() = default;
    InstantaneousGraph(ActivityMask active, std::vector<std::size_t> offsets,
                       std::vector<std::uint32_t> neighbours, double range, std::uint64_t slot);

    std::size_t node_count() const noexcept { return active_.size(); }
    std::size_t edge_count() const noexcept { return neighbours_.size() / 2; }
    bool is_active(std::size_t i) const noexcept { return active_[i] != 0; }
    const ActivityMask& active() const noexcept { return active_; }
    std::span<const std::uint32_t> neighbours(std::size_t i) const noexcept
    {
        return {neighbours_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    bool has_edge(std::size_t i, std::size_t j) const noexcept;
    double range() const noexcept { return range_; }
    std::uint64_t slot() const noexcept { return slot_; }

    friend bool operator==(const InstantaneousGraph&, const InstantaneousGraph&) = default;

private:
    ActivityMask active_;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::uint32_t> neighbours_;
    double range_ = 0.0;
    std::uint64_t slot_ = 0;
};

/// Maximal set of nodes connected in one slot. Members are sorted.
struct Cluster {
    std::vector<std::uint32_t> members;
    std::uint64_t slot = 0;

    std::size_t size() const noexcept { return members.size(); }
    friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Uniform bucket grid over a region for fixed-radius neighbour queries.
class SpatialGrid {
public:
    SpatialGrid(const PointSet& points, double cell_side);

    /// Calls fn(j) for every point j in the 3x3 block of cells around p.
    template <typename Fn>
    void for_each_near(Point p, Fn&& fn) const
    {
        const auto [cx, cy] = cell_of(p);
        for (long gy = cy - 1; gy <= cy + 1; ++gy) {
            if (gy < 0 || gy >= rows_) continue;
            for (long gx = cx - 1; gx <= cx + 1; ++gx) {
                if (gx < 0 || gx >= cols_) continue;
                const auto cell = static_cast<std::size_t>(gy * cols_ + gx);
                for (std::size_t k = starts_[cell]; k < starts_[cell + 1]; ++k) fn(items_[k]);
            }
        }
    }

    double cell_side() const noexcept { return side_; }

private:
    std::pair<long, long> cell_of(Point p) const noexcept;

    Point origin_{};
    double side_ = 1.0;
    long cols_ = 1;
    long rows_ = 1;
    std::vector<std::size_t> starts_;
    std::vector<std::uint32_t> items_;
};

// -- sampling ---------------------------------------------------------------

/// Homogeneous Poisson point process of the given intensity, strictly inside the region.
PointSet sample_ppp(double density, const Region& region, std::uint64_t seed);

/// Independent thinning: every point survives with probability keep_prob.
PointSet thin(const PointSet& points, double keep_prob, std::uint64_t seed);

/// Keep the points whose mask entry is nonzero; density is scaled by keep_prob.
PointSet select(const PointSet& points, const ActivityMask& mask, double keep_prob);

/// ON/OFF state of every node in one slot, each node ON with probability q.
ActivityMask activate(const PointSet& points, double q, std::uint64_t slot, std::uint64_t seed);

ActivityMask all_active(const PointSet& points);

// -- graphs -----------------------------------------------------------------

/// Edges between active nodes at distance <= range, found through a uniform
/// grid. Rows are built in parallel.
InstantaneousGraph build_instantaneous_graph(const PointSet& points, const ActivityMask& active,
                                             double range, std::uint64_t slot = 0);

/// All-pairs construction; serial reference for the grid-based builder.
InstantaneousGraph build_instantaneous_graph_reference(const PointSet& points, const ActivityMask& active,
                                                       double range, std::uint64_t slot = 0);

/// Cluster label per node (-1 for inactive nodes). Labels are dense and
/// ordered by each cluster's smallest member.
std::vector<std::int32_t> cluster_labels(const InstantaneousGraph& graph);

std::vector<Cluster> clusters(const InstantaneousGraph& graph);

/// Translate and rotate so u is the origin and v sits on the positive x axis.
PointSet rotate_frame(const PointSet& points, std::size_t u, std::size_t v);

/// Largest horizontal distance between two members.
double cluster_extent_x(const Cluster& cluster, const PointSet& points);

/// Breadth-first hop count; nullopt when v is unreachable from u.
std::optional<int> shortest_path_hops(const InstantaneousGraph& graph, std::size_t u, std::size_t v);

/// Hop distance from source to every node; -1 marks unreachable nodes.
std::vector<int> hop_distances(const InstantaneousGraph& graph, std::size_t source);

/// True iff one cluster touches both the left and right margin of width range.
bool detect_percolation(const InstantaneousGraph& graph, const PointSet& points);

/// Label of the horizontally spanning cluster, if any (lowest label wins).
std::optional<std::int32_t> spanning_cluster(const InstantaneousGraph& graph, const PointSet& points,
                                             const std::vector<std::int32_t>& labels);

}  // namespace reldelay
