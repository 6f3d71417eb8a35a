#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reldelay/geometry.hpp"

namespace reldelay {

enum class Orientation : std::uint8_t { Horizontal, Vertical };

struct VertexCoord {
    long i = 0;  // column (x index)
    long j = 0;  // row (y index)
    friend bool operator==(const VertexCoord&, const VertexCoord&) = default;
};

struct LatticeEdge {
    Orientation orientation = Orientation::Horizontal;
    VertexCoord from;  // lower/left endpoint
    VertexCoord to;
};

/// Square lattice with edge length equal to the communication range, laid
/// over a region. Vertices are (columns + 1) x (rows + 1).
///
/// Vertex ids are row-major: j * (columns + 1) + i. Edge ids list the
/// horizontal edges first (row-major, columns per row), then the vertical
/// edges (row-major, columns + 1 per row).
class Lattice {
public:
    Lattice() = default;
    Lattice(Point origin, double edge_length, long columns, long rows);

    Point origin() const noexcept { return origin_; }
    double edge_length() const noexcept { return edge_length_; }
    long columns() const noexcept { return columns_; }
    long rows() const noexcept { return rows_; }

    std::size_t vertex_count() const noexcept { return static_cast<std::size_t>((columns_ + 1) * (rows_ + 1)); }
    std::size_t horizontal_edge_count() const noexcept { return static_cast<std::size_t>(columns_ * (rows_ + 1)); }
    std::size_t edge_count() const noexcept
    {
        return horizontal_edge_count() + static_cast<std::size_t>((columns_ + 1) * rows_);
    }

    bool in_lattice(VertexCoord v) const noexcept { return v.i >= 0 && v.i <= columns_ && v.j >= 0 && v.j <= rows_; }
    std::size_t vertex_id(VertexCoord v) const noexcept { return static_cast<std::size_t>(v.j * (columns_ + 1) + v.i); }
    VertexCoord vertex(std::size_t id) const noexcept;
    Point vertex_position(VertexCoord v) const noexcept;
    bool on_border(VertexCoord v) const noexcept { return v.i == 0 || v.j == 0 || v.i == columns_ || v.j == rows_; }

    std::optional<std::size_t> horizontal_edge(long i, long j) const noexcept;
    std::optional<std::size_t> vertical_edge(long i, long j) const noexcept;
    LatticeEdge edge(std::size_t id) const noexcept;
    Point midpoint(std::size_t edge_id) const noexcept;

    /// Ids of every edge whose diameter-circle contains p (closed disk).
    std::vector<std::size_t> edges_covering(Point p) const;

    /// An edge whose circle lies entirely inside the lattice rectangle.
    bool is_interior_edge(std::size_t edge_id) const noexcept;

    friend bool operator==(const Lattice&, const Lattice&) = default;

private:
    Point origin_{};
    double edge_length_ = 1.0;
    long columns_ = 0;
    long rows_ = 0;
};

/// Occupied-edge flags for one point set.
struct EdgeOccupancy {
    Lattice lattice;
    std::vector<std::uint8_t> occupied;
    std::size_t source_points = 0;  // points that contributed

    std::size_t occupied_count() const noexcept;
};

/// Maximal set of occupied edges connected through shared vertices.
struct LatticeComponent {
    std::vector<std::size_t> edges;     // sorted edge ids
    std::vector<std::size_t> vertices;  // sorted vertex ids
    std::size_t size = 0;               // vertex count
    long diameter = 0;                  // horizontal extent in edges
    std::size_t neighbouring = 0;       // in-lattice vertices adjacent to but outside the component
    bool touches_border = false;
};

/// Components plus the edge -> component lookup (-1 for unoccupied edges).
struct ComponentSet {
    std::vector<LatticeComponent> components;
    std::vector<std::int32_t> edge_component;
};

Lattice build_lattice(const Region& region, double range);

/// Grid-driven occupancy: each edge checks the points around its midpoint.
/// The edge loop runs in parallel. With a mask, only points whose entry is
/// nonzero take part.
EdgeOccupancy occupy_edges(const Lattice& lattice, const PointSet& points);
EdgeOccupancy occupy_edges(const Lattice& lattice, const PointSet& points, const ActivityMask& mask);

/// Serial point-driven reference for occupy_edges.
EdgeOccupancy occupy_edges_reference(const Lattice& lattice, const PointSet& points, const ActivityMask& mask);

/// Union-find over the vertices of occupied edges.
ComponentSet connected_components(const EdgeOccupancy& occ);

long component_diameter(const LatticeComponent& component, const Lattice& lattice);
std::size_t neighboring_vertices(const LatticeComponent& component, const Lattice& lattice);

/// Builds a component record (vertices, size, diameter, neighbours) from a set of edge ids.
LatticeComponent make_component(std::vector<std::size_t> edges, const Lattice& lattice);

/// Whether pt lies in the union of the diameter-circles of the component's edges.
bool point_in_component_area(Point pt, const LatticeComponent& component, const Lattice& lattice);

/// Components touched by the edges the cluster's members occupy (sorted, unique).
std::vector<std::int32_t> cluster_component_candidates(const Cluster& cluster, const PointSet& points,
                                                       const EdgeOccupancy& occ, const ComponentSet& comps);

/// The unique component owning every edge the cluster's members occupy.
/// Throws ModelViolation if the members straddle several components.
std::size_t map_cluster_to_component(const Cluster& cluster, const PointSet& points, const EdgeOccupancy& occ,
                                     const ComponentSet& comps);

/// Fraction of the lattice's interior edges that are occupied.
double interior_occupied_fraction(const EdgeOccupancy& occ);

/// Probability that an interior edge belongs to a component of size n,
/// indexed by n (entries 0 and 1 are always zero).
std::vector<double> component_size_pmf_per_edge(const ComponentSet& comps, const Lattice& lattice,
                                                std::size_t max_size);

}  // namespace reldelay
