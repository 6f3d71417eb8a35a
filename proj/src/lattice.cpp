#include "reldelay/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "reldelay/errors.hpp"
#include "reldelay/union_find.hpp"

namespace reldelay {

namespace {

bool contains_sorted(const std::vector<std::size_t>& v, std::size_t x)
{
    return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace

Lattice::Lattice(Point origin, double edge_length, long columns, long rows)
    : origin_(origin), edge_length_(edge_length), columns_(columns), rows_(rows)
{
}

VertexCoord Lattice::vertex(std::size_t id) const noexcept
{
    const auto stride = static_cast<std::size_t>(columns_ + 1);
    return {static_cast<long>(id % stride), static_cast<long>(id / stride)};
}

Point Lattice::vertex_position(VertexCoord v) const noexcept
{
    return {origin_.x + static_cast<double>(v.i) * edge_length_, origin_.y + static_cast<double>(v.j) * edge_length_};
}

std::optional<std::size_t> Lattice::horizontal_edge(long i, long j) const noexcept
{
    if (i < 0 || i >= columns_ || j < 0 || j > rows_) return std::nullopt;
    return static_cast<std::size_t>(j * columns_ + i);
}

std::optional<std::size_t> Lattice::vertical_edge(long i, long j) const noexcept
{
    if (i < 0 || i > columns_ || j < 0 || j >= rows_) return std::nullopt;
    return horizontal_edge_count() + static_cast<std::size_t>(j * (columns_ + 1) + i);
}

LatticeEdge Lattice::edge(std::size_t id) const noexcept
{
    const std::size_t h = horizontal_edge_count();
    if (id < h) {
        const auto c = static_cast<std::size_t>(columns_);
        const VertexCoord from{static_cast<long>(id % c), static_cast<long>(id / c)};
        return {Orientation::Horizontal, from, {from.i + 1, from.j}};
    }
    const auto c = static_cast<std::size_t>(columns_ + 1);
    const std::size_t k = id - h;
    const VertexCoord from{static_cast<long>(k % c), static_cast<long>(k / c)};
    return {Orientation::Vertical, from, {from.i, from.j + 1}};
}

Point Lattice::midpoint(std::size_t edge_id) const noexcept
{
    const LatticeEdge e = edge(edge_id);
    const double dx = e.orientation == Orientation::Horizontal ? 0.5 : 0.0;
    const double dy = e.orientation == Orientation::Vertical ? 0.5 : 0.0;
    return {origin_.x + (static_cast<double>(e.from.i) + dx) * edge_length_,
            origin_.y + (static_cast<double>(e.from.j) + dy) * edge_length_};
}

std::vector<std::size_t> Lattice::edges_covering(Point p) const
{
    const double radius2 = 0.25 * edge_length_ * edge_length_;
    const auto ci = static_cast<long>(std::floor((p.x - origin_.x) / edge_length_));
    const auto cj = static_cast<long>(std::floor((p.y - origin_.y) / edge_length_));
    std::vector<std::size_t> out;
    for (long j = cj - 1; j <= cj + 2; ++j) {
        for (long i = ci - 1; i <= ci + 2; ++i) {
            if (auto h = horizontal_edge(i, j); h && squared_distance(p, midpoint(*h)) <= radius2) out.push_back(*h);
            if (auto v = vertical_edge(i, j); v && squared_distance(p, midpoint(*v)) <= radius2) out.push_back(*v);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Lattice::is_interior_edge(std::size_t edge_id) const noexcept
{
    const LatticeEdge e = edge(edge_id);
    if (e.orientation == Orientation::Horizontal) return e.from.j >= 1 && e.from.j <= rows_ - 1;
    return e.from.i >= 1 && e.from.i <= columns_ - 1;
}

std::size_t EdgeOccupancy::occupied_count() const noexcept
{
    return static_cast<std::size_t>(std::count(occupied.begin(), occupied.end(), std::uint8_t{1}));
}

Lattice build_lattice(const Region& region, double range)
{
    if (!(range > 0.0) || !std::isfinite(range)) throw ParameterError("lattice edge length must be positive");
    region.validate();
    // The small slack keeps exact multiples (20 / 1) from rounding up.
    const auto columns = static_cast<long>(std::ceil(region.width / range - 1e-9));
    const auto rows = static_cast<long>(std::ceil(region.height / range - 1e-9));
    return Lattice(region.origin, range, std::max(columns, 1L), std::max(rows, 1L));
}

EdgeOccupancy occupy_edges(const Lattice& lattice, const PointSet& points)
{
    return occupy_edges(lattice, points, all_active(points));
}

EdgeOccupancy occupy_edges(const Lattice& lattice, const PointSet& points, const ActivityMask& mask)
{
    if (mask.size() != points.size()) throw ParameterError("occupancy mask length does not match node count");

    EdgeOccupancy occ;
    occ.lattice = lattice;
    occ.occupied.assign(lattice.edge_count(), 0);
    occ.source_points = static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(), [](auto m) { return m != 0; }));
    if (points.empty()) return occ;

    const SpatialGrid grid(points, 0.5 * lattice.edge_length());
    const double radius2 = 0.25 * lattice.edge_length() * lattice.edge_length();
    const auto edges = static_cast<std::int64_t>(lattice.edge_count());

#pragma omp parallel for schedule(static)
    for (std::int64_t e = 0; e < edges; ++e) {
        const Point m = lattice.midpoint(static_cast<std::size_t>(e));
        bool hit = false;
        grid.for_each_near(m, [&](std::uint32_t k) {
            if (!hit && mask[k] && squared_distance(points.positions[k], m) <= radius2) hit = true;
        });
        occ.occupied[e] = hit ? 1 : 0;
    }
    return occ;
}

EdgeOccupancy occupy_edges_reference(const Lattice& lattice, const PointSet& points, const ActivityMask& mask)
{
    if (mask.size() != points.size()) throw ParameterError("occupancy mask length does not match node count");
    EdgeOccupancy occ;
    occ.lattice = lattice;
    occ.occupied.assign(lattice.edge_count(), 0);
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (!mask[k]) continue;
        ++occ.source_points;
        for (auto e : lattice.edges_covering(points.positions[k])) occ.occupied[e] = 1;
    }
    return occ;
}

LatticeComponent make_component(std::vector<std::size_t> edges, const Lattice& lattice)
{
    LatticeComponent c;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    c.edges = std::move(edges);
    for (auto e : c.edges) {
        const LatticeEdge le = lattice.edge(e);
        c.vertices.push_back(lattice.vertex_id(le.from));
        c.vertices.push_back(lattice.vertex_id(le.to));
    }
    std::sort(c.vertices.begin(), c.vertices.end());
    c.vertices.erase(std::unique(c.vertices.begin(), c.vertices.end()), c.vertices.end());
    c.size = c.vertices.size();
    if (c.size > 0) c.diameter = component_diameter(c, lattice);
    c.neighbouring = neighboring_vertices(c, lattice);
    c.touches_border = std::any_of(c.vertices.begin(), c.vertices.end(),
                                   [&](std::size_t v) { return lattice.on_border(lattice.vertex(v)); });
    return c;
}

ComponentSet connected_components(const EdgeOccupancy& occ)
{
    const Lattice& lattice = occ.lattice;
    DisjointSet dsu(lattice.vertex_count());
    for (std::size_t e = 0; e < occ.occupied.size(); ++e) {
        if (!occ.occupied[e]) continue;
        const LatticeEdge le = lattice.edge(e);
        dsu.unite(lattice.vertex_id(le.from), lattice.vertex_id(le.to));
    }

    ComponentSet out;
    out.edge_component.assign(occ.occupied.size(), -1);
    std::unordered_map<std::size_t, std::int32_t> root_to_component;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t e = 0; e < occ.occupied.size(); ++e) {
        if (!occ.occupied[e]) continue;
        const std::size_t root = dsu.find(lattice.vertex_id(lattice.edge(e).from));
        auto [it, inserted] = root_to_component.try_emplace(root, static_cast<std::int32_t>(groups.size()));
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(e);
        out.edge_component[e] = it->second;
    }
    out.components.reserve(groups.size());
    for (auto& g : groups) out.components.push_back(make_component(std::move(g), lattice));
    return out;
}

long component_diameter(const LatticeComponent& component, const Lattice& lattice)
{
    if (component.vertices.empty()) throw ParameterError("component_diameter: empty component");
    long lo = lattice.columns() + 1;
    long hi = -1;
    for (auto v : component.vertices) {
        const long i = lattice.vertex(v).i;
        lo = std::min(lo, i);
        hi = std::max(hi, i);
    }
    return hi - lo;
}

std::size_t neighboring_vertices(const LatticeComponent& component, const Lattice& lattice)
{
    std::vector<std::size_t> found;
    constexpr long steps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (auto v : component.vertices) {
        const VertexCoord c = lattice.vertex(v);
        for (const auto& s : steps) {
            const VertexCoord n{c.i + s[0], c.j + s[1]};
            if (!lattice.in_lattice(n)) continue;
            const std::size_t id = lattice.vertex_id(n);
            if (!contains_sorted(component.vertices, id)) found.push_back(id);
        }
    }
    std::sort(found.begin(), found.end());
    return static_cast<std::size_t>(std::unique(found.begin(), found.end()) - found.begin());
}

bool point_in_component_area(Point pt, const LatticeComponent& component, const Lattice& lattice)
{
    const double radius2 = 0.25 * lattice.edge_length() * lattice.edge_length();
    return std::any_of(component.edges.begin(), component.edges.end(),
                       [&](std::size_t e) { return squared_distance(pt, lattice.midpoint(e)) <= radius2; });
}

std::vector<std::int32_t> cluster_component_candidates(const Cluster& cluster, const PointSet& points,
                                                       const EdgeOccupancy& occ, const ComponentSet& comps)
{
    std::vector<std::int32_t> out;
    for (auto m : cluster.members) {
        for (auto e : occ.lattice.edges_covering(points.positions[m])) {
            if (comps.edge_component[e] >= 0) out.push_back(comps.edge_component[e]);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t map_cluster_to_component(const Cluster& cluster, const PointSet& points, const EdgeOccupancy& occ,
                                     const ComponentSet& comps)
{
    if (cluster.members.empty()) throw ParameterError("map_cluster_to_component: empty cluster");
    const auto candidates = cluster_component_candidates(cluster, points, occ, comps);
    if (candidates.empty()) {
        throw ModelViolation("cluster members occupy no edge of the given occupancy");
    }
    if (candidates.size() > 1) {
        throw ModelViolation("cluster of " + std::to_string(cluster.size()) + " nodes straddles " +
                             std::to_string(candidates.size()) + " lattice components");
    }
    return static_cast<std::size_t>(candidates.front());
}

double interior_occupied_fraction(const EdgeOccupancy& occ)
{
    std::size_t interior = 0;
    std::size_t hit = 0;
    for (std::size_t e = 0; e < occ.occupied.size(); ++e) {
        if (!occ.lattice.is_interior_edge(e)) continue;
        ++interior;
        hit += occ.occupied[e];
    }
    return interior == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(interior);
}

std::vector<double> component_size_pmf_per_edge(const ComponentSet& comps, const Lattice& lattice,
                                                std::size_t max_size)
{
    std::vector<double> pmf(max_size + 1, 0.0);
    std::size_t interior = 0;
    for (std::size_t e = 0; e < comps.edge_component.size(); ++e) {
        if (!lattice.is_interior_edge(e)) continue;
        ++interior;
        const auto c = comps.edge_component[e];
        if (c < 0) continue;
        const std::size_t n = comps.components[c].size;
        if (n <= max_size) pmf[n] += 1.0;
    }
    if (interior > 0) {
        for (auto& v : pmf) v /= static_cast<double>(interior);
    }
    return pmf;
}

}  // namespace reldelay
