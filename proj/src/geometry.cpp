#include "reldelay/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <string>

#include "reldelay/errors.hpp"
#include "reldelay/random.hpp"
#include "reldelay/union_find.hpp"

namespace reldelay {

namespace {

void require_probability(double p, const char* name)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

void require_range(double range)
{
    if (!(range > 0.0) || !std::isfinite(range)) {
        throw ParameterError("communication range must be positive and finite");
    }
}

void require_mask(const PointSet& points, const ActivityMask& active)
{
    if (active.size() != points.size()) {
        throw ParameterError("activity mask length " + std::to_string(active.size()) +
                             " does not match node count " + std::to_string(points.size()));
    }
}

InstantaneousGraph assemble(const ActivityMask& active, std::vector<std::vector<std::uint32_t>>& rows,
                            double range, std::uint64_t slot)
{
    std::vector<std::size_t> offsets(rows.size() + 1, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) offsets[i + 1] = offsets[i] + rows[i].size();
    std::vector<std::uint32_t> flat;
    flat.reserve(offsets.back());
    for (auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
    return InstantaneousGraph(active, std::move(offsets), std::move(flat), range, slot);
}

}  // namespace

double distance(Point a, Point b) noexcept
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

bool Region::contains(Point p) const noexcept
{
    return p.x >= origin.x && p.x <= origin.x + width && p.y >= origin.y && p.y <= origin.y + height;
}

void Region::validate() const
{
    if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) || !std::isfinite(height) ||
        !std::isfinite(origin.x) || !std::isfinite(origin.y)) {
        throw ParameterError("region must have positive finite width and height");
    }
}

InstantaneousGraph::InstantaneousGraph(ActivityMask active, std::vector<std::size_t> offsets,
                                       std::vector<std::uint32_t> neighbours, double range,
                                       std::uint64_t slot)
    : active_(std::move(active)),
      offsets_(std::move(offsets)),
      neighbours_(std::move(neighbours)),
      range_(range),
      slot_(slot)
{
}

bool InstantaneousGraph::has_edge(std::size_t i, std::size_t j) const noexcept
{
    const auto row = neighbours(i);
    return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(j));
}

SpatialGrid::SpatialGrid(const PointSet& points, double cell_side) : origin_(points.region.origin)
{
    constexpr double max_cells_per_axis = 4096.0;
    const Region& r = points.region;
    side_ = std::max({cell_side, r.width / max_cells_per_axis, r.height / max_cells_per_axis});
    cols_ = std::max(1L, static_cast<long>(std::ceil(r.width / side_)));
    rows_ = std::max(1L, static_cast<long>(std::ceil(r.height / side_)));

    const auto cells = static_cast<std::size_t>(cols_ * rows_);
    std::vector<std::size_t> cell_index(points.size());
    starts_.assign(cells + 1, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [cx, cy] = cell_of(points.positions[i]);
        cell_index[i] = static_cast<std::size_t>(cy * cols_ + cx);
        ++starts_[cell_index[i] + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) starts_[c + 1] += starts_[c];
    items_.resize(points.size());
    auto fill = starts_;
    for (std::size_t i = 0; i < points.size(); ++i) items_[fill[cell_index[i]]++] = static_cast<std::uint32_t>(i);
}

std::pair<long, long> SpatialGrid::cell_of(Point p) const noexcept
{
    auto cx = static_cast<long>(std::floor((p.x - origin_.x) / side_));
    auto cy = static_cast<long>(std::floor((p.y - origin_.y) / side_));
    return {std::clamp(cx, 0L, cols_ - 1), std::clamp(cy, 0L, rows_ - 1)};
}

PointSet sample_ppp(double density, const Region& region, std::uint64_t seed)
{
    if (!std::isfinite(density) || density < 0.0) {
        throw ParameterError("density must be finite and non-negative");
    }
    region.validate();

    PointSet out;
    out.region = region;
    out.density = density;
    const double mean = density * region.area();
    if (mean == 0.0) return out;

    std::mt19937_64 engine(rng::hash(seed, rng::Stream::PointCount, 0));
    std::poisson_distribution<std::uint64_t> count_dist(mean);
    const std::uint64_t count = count_dist(engine);

    out.positions.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double u = rng::uniform(seed, rng::Stream::PointPosition, i, 0);
        const double v = rng::uniform(seed, rng::Stream::PointPosition, i, 1);
        out.positions[i] = {region.origin.x + u * region.width, region.origin.y + v * region.height};
    }
    return out;
}

PointSet thin(const PointSet& points, double keep_prob, std::uint64_t seed)
{
    require_probability(keep_prob, "keep probability");
    ActivityMask keep(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        keep[i] = rng::uniform(seed, rng::Stream::Thinning, i) < keep_prob;
    }
    return select(points, keep, keep_prob);
}

PointSet select(const PointSet& points, const ActivityMask& mask, double keep_prob)
{
    require_mask(points, mask);
    PointSet out;
    out.region = points.region;
    out.density = points.density * keep_prob;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (mask[i]) out.positions.push_back(points.positions[i]);
    }
    return out;
}

ActivityMask activate(const PointSet& points, double q, std::uint64_t slot, std::uint64_t seed)
{
    require_probability(q, "activation probability");
    ActivityMask active(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        active[i] = rng::uniform(seed, rng::Stream::Activation, slot, i) < q;
    }
    return active;
}

ActivityMask all_active(const PointSet& points)
{
    return ActivityMask(points.size(), 1);
}

InstantaneousGraph build_instantaneous_graph(const PointSet& points, const ActivityMask& active,
                                             double range, std::uint64_t slot)
{
    require_range(range);
    require_mask(points, active);

    const SpatialGrid grid(points, range);
    const double r2 = range * range;
    const auto n = static_cast<std::int64_t>(points.size());
    std::vector<std::vector<std::uint32_t>> rows(points.size());

#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        const Point p = points.positions[i];
        auto& row = rows[i];
        grid.for_each_near(p, [&](std::uint32_t j) {
            if (j != i && active[j] && squared_distance(p, points.positions[j]) <= r2) row.push_back(j);
        });
        std::sort(row.begin(), row.end());
    }
    return assemble(active, rows, range, slot);
}

InstantaneousGraph build_instantaneous_graph_reference(const PointSet& points, const ActivityMask& active,
                                                       double range, std::uint64_t slot)
{
    require_range(range);
    require_mask(points, active);

    const double r2 = range * range;
    std::vector<std::vector<std::uint32_t>> rows(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!active[i]) continue;
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (active[j] && squared_distance(points.positions[i], points.positions[j]) <= r2) {
                rows[i].push_back(static_cast<std::uint32_t>(j));
                rows[j].push_back(static_cast<std::uint32_t>(i));
            }
        }
    }
    return assemble(active, rows, range, slot);
}

std::vector<std::int32_t> cluster_labels(const InstantaneousGraph& graph)
{
    const std::size_t n = graph.node_count();
    DisjointSet dsu(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto j : graph.neighbours(i)) {
            if (j > i) dsu.unite(i, j);
        }
    }
    std::vector<std::int32_t> labels(n, -1);
    std::vector<std::int32_t> root_label(n, -1);
    std::int32_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!graph.is_active(i)) continue;
        const std::size_t root = dsu.find(i);
        if (root_label[root] < 0) root_label[root] = next++;
        labels[i] = root_label[root];
    }
    return labels;
}

std::vector<Cluster> clusters(const InstantaneousGraph& graph)
{
    const auto labels = cluster_labels(graph);
    std::int32_t count = 0;
    for (auto l : labels) count = std::max(count, l + 1);
    std::vector<Cluster> out(static_cast<std::size_t>(count));
    for (auto& c : out) c.slot = graph.slot();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= 0) out[labels[i]].members.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

PointSet rotate_frame(const PointSet& points, std::size_t u, std::size_t v)
{
    if (u >= points.size() || v >= points.size()) throw ParameterError("rotate_frame: node index out of range");
    if (u == v) throw ParameterError("rotate_frame: u and v must differ");

    const Point pu = points.positions[u];
    const Point pv = points.positions[v];
    const double d = distance(pu, pv);
    if (d == 0.0) throw ParameterError("rotate_frame: u and v are co-located");
    const double c = (pv.x - pu.x) / d;
    const double s = (pv.y - pu.y) / d;
    auto map = [&](Point p) {
        const double dx = p.x - pu.x;
        const double dy = p.y - pu.y;
        return Point{dx * c + dy * s, -dx * s + dy * c};
    };

    PointSet out;
    out.density = points.density;
    out.positions.reserve(points.size());
    for (const Point& p : points.positions) out.positions.push_back(map(p));
    out.positions[u] = {0.0, 0.0};
    out.positions[v] = {d, 0.0};

    // New region: bounding box of the transformed original region.
    const Region& r = points.region;
    const Point corners[4] = {map(r.origin), map({r.origin.x + r.width, r.origin.y}),
                              map({r.origin.x, r.origin.y + r.height}),
                              map({r.origin.x + r.width, r.origin.y + r.height})};
    double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
    double hi_x = -lo_x, hi_y = -lo_x;
    for (const Point& p : corners) {
        lo_x = std::min(lo_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_x = std::max(hi_x, p.x);
        hi_y = std::max(hi_y, p.y);
    }
    for (const Point& p : out.positions) {
        lo_x = std::min(lo_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_x = std::max(hi_x, p.x);
        hi_y = std::max(hi_y, p.y);
    }
    out.region = Region{hi_x - lo_x, hi_y - lo_y, {lo_x, lo_y}};
    return out;
}

double cluster_extent_x(const Cluster& cluster, const PointSet& points)
{
    if (cluster.members.empty()) throw ParameterError("cluster_extent_x: empty cluster");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (auto m : cluster.members) {
        lo = std::min(lo, points.positions[m].x);
        hi = std::max(hi, points.positions[m].x);
    }
    return hi - lo;
}

std::vector<int> hop_distances(const InstantaneousGraph& graph, std::size_t source)
{
    std::vector<int> dist(graph.node_count(), -1);
    if (source >= graph.node_count()) throw ParameterError("hop_distances: source out of range");
    std::deque<std::size_t> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        for (auto j : graph.neighbours(i)) {
            if (dist[j] < 0) {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    return dist;
}

std::optional<int> shortest_path_hops(const InstantaneousGraph& graph, std::size_t u, std::size_t v)
{
    if (u >= graph.node_count() || v >= graph.node_count()) {
        throw ParameterError("shortest_path_hops: node index out of range");
    }
    if (u == v) return 0;
    std::vector<int> dist(graph.node_count(), -1);
    std::deque<std::size_t> queue{u};
    dist[u] = 0;
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        for (auto j : graph.neighbours(i)) {
            if (dist[j] >= 0) continue;
            dist[j] = dist[i] + 1;
            if (j == v) return dist[j];
            queue.push_back(j);
        }
    }
    return std::nullopt;
}

std::optional<std::int32_t> spanning_cluster(const InstantaneousGraph& graph, const PointSet& points,
                                             const std::vector<std::int32_t>& labels)
{
    const Region& r = points.region;
    const double margin = graph.range();
    std::int32_t count = 0;
    for (auto l : labels) count = std::max(count, l + 1);
    std::vector<std::uint8_t> left(count, 0), right(count, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) continue;
        const double x = points.positions[i].x;
        if (x - r.origin.x <= margin) left[labels[i]] = 1;
        if (r.origin.x + r.width - x <= margin) right[labels[i]] = 1;
    }
    for (std::int32_t l = 0; l < count; ++l) {
        if (left[l] && right[l]) return l;
    }
    return std::nullopt;
}

bool detect_percolation(const InstantaneousGraph& graph, const PointSet& points)
{
    require_mask(points, graph.active());
    return spanning_cluster(graph, points, cluster_labels(graph)).has_value();
}

}  // namespace reldelay
