#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "reldelay/errors.hpp"
#include "reldelay/lattice.hpp"

using namespace reldelay;

namespace {

PointSet points_in(const Region& region, std::vector<Point> pts)
{
    PointSet s;
    s.region = region;
    s.positions = std::move(pts);
    return s;
}

LatticeComponent component_of(const Lattice& lat, const std::vector<std::pair<VertexCoord, VertexCoord>>& edges)
{
    std::vector<std::size_t> ids;
    for (auto [a, b] : edges) {
        if (a.j == b.j) {
            ids.push_back(*lat.horizontal_edge(std::min(a.i, b.i), a.j));
        } else {
            ids.push_back(*lat.vertical_edge(a.i, std::min(a.j, b.j)));
        }
    }
    return make_component(ids, lat);
}

EdgeOccupancy occupancy_from(const Lattice& lat, std::vector<std::uint8_t> occupied)
{
    EdgeOccupancy occ;
    occ.lattice = lat;
    occ.occupied = std::move(occupied);
    return occ;
}

}  // namespace

TEST_SUITE("lattice")
{
    TEST_CASE("build_lattice counts")
    {
        const auto a = build_lattice(Region{20.0, 20.0, {}}, 1.0);
        CHECK(a.vertex_count() == 21u * 21u);
        CHECK(a.edge_count() == 840u);
        const auto b = build_lattice(Region{1.0, 1.0, {}}, 1.0);
        CHECK(b.vertex_count() == 4u);
        CHECK(b.edge_count() == 4u);
        const auto c = build_lattice(Region{20.0, 20.0, {}}, 2.0);
        CHECK(c.vertex_count() == 11u * 11u);
    }

    TEST_CASE("edge ids round-trip through the BFS oracle's endpoint formula")
    {
        const Lattice lat({0.0, 0.0}, 1.0, 4, 3);
        for (std::size_t e = 0; e < lat.edge_count(); ++e) {
            const auto ed = lat.edge(e);
            const auto [a, b] = oracle::edge_vertices(4, 3, static_cast<long>(e));
            CHECK(lat.vertex_id(ed.from) == static_cast<std::size_t>(a));
            CHECK(lat.vertex_id(ed.to) == static_cast<std::size_t>(b));
        }
    }

    TEST_CASE("occupancy: empty set and single node at (0.5, 0)")
    {
        const Region region{20.0, 20.0, {}};
        const auto lat = build_lattice(region, 1.0);
        CHECK(occupy_edges(lat, points_in(region, {})).occupied_count() == 0);

        const auto occ = occupy_edges(lat, points_in(region, {{0.5, 0.0}}));
        REQUIRE(occ.occupied_count() == 1);
        CHECK(occ.occupied[*lat.horizontal_edge(0, 0)] == 1);
    }

    TEST_CASE("closed disk: a point exactly r0/2 from a midpoint occupies the edge")
    {
        const Region region{4.0, 4.0, {}};
        const auto lat = build_lattice(region, 1.0);
        const auto occ = occupy_edges(lat, points_in(region, {{1.5, 1.5}}));
        // centre of a unit cell: exactly 0.5 from the four surrounding edge midpoints
        CHECK(occ.occupied_count() == 4);
    }

    TEST_CASE("parallel occupancy equals the serial reference")
    {
        for (int s = 0; s < 20; ++s) {
            const Region region{15.0, 11.0, {2.0, -1.0}};
            const auto pts = sample_ppp(1.8, region, s);
            const auto lat = build_lattice(region, 1.0);
            const auto mask = activate(pts, 0.5, 1, s);
            CHECK(occupy_edges(lat, pts, mask).occupied == occupy_edges_reference(lat, pts, mask).occupied);
        }
    }

    TEST_CASE("occupancy brute force against edge midpoints")
    {
        const Region region{10.0, 10.0, {}};
        const auto lat = build_lattice(region, 1.0);
        const auto pts = sample_ppp(0.8, region, 31);
        const auto occ = occupy_edges(lat, pts);
        for (std::size_t e = 0; e < lat.edge_count(); ++e) {
            const Point m = lat.midpoint(e);
            bool hit = false;
            for (const auto& p : pts.positions) hit = hit || std::hypot(p.x - m.x, p.y - m.y) <= 0.5;
            CHECK(static_cast<bool>(occ.occupied[e]) == hit);
        }
    }

    TEST_CASE("components: single edges and a shared vertex")
    {
        const Lattice lat({0.0, 0.0}, 1.0, 5, 5);
        std::vector<std::uint8_t> occ(lat.edge_count(), 0);
        occ[*lat.horizontal_edge(1, 1)] = 1;
        auto comps = connected_components(occupancy_from(lat, occ));
        REQUIRE(comps.components.size() == 1);
        CHECK(comps.components[0].size == 2);
        CHECK(comps.components[0].diameter == 1);

        std::fill(occ.begin(), occ.end(), 0);
        occ[*lat.vertical_edge(1, 1)] = 1;
        comps = connected_components(occupancy_from(lat, occ));
        REQUIRE(comps.components.size() == 1);
        CHECK(comps.components[0].size == 2);
        CHECK(comps.components[0].diameter == 0);

        occ[*lat.horizontal_edge(1, 2)] = 1;  // shares vertex (1, 2)
        comps = connected_components(occupancy_from(lat, occ));
        REQUIRE(comps.components.size() == 1);
        CHECK(comps.components[0].size == 3);
    }

    TEST_CASE("components match BFS on random 5x5 occupancies")
    {
        const Lattice lat({0.0, 0.0}, 1.0, 5, 5);
        std::mt19937_64 gen(12);
        for (int t = 0; t < 100; ++t) {
            std::vector<std::uint8_t> occ(lat.edge_count());
            for (auto& o : occ) o = std::bernoulli_distribution(0.45)(gen);
            const auto comps = connected_components(occupancy_from(lat, occ));
            oracle::EdgePartition got;
            for (const auto& c : comps.components) got.insert(c.edges);
            CHECK(got == oracle::bfs_components(5, 5, occ));
        }
    }

    TEST_CASE("component diameter: chains and L shape")
    {
        const Lattice lat({0.0, 0.0}, 1.0, 6, 6);
        const auto h = component_of(lat, {{{1, 2}, {2, 2}}, {{2, 2}, {3, 2}}, {{3, 2}, {4, 2}}});
        CHECK(h.size == 4);
        CHECK(component_diameter(h, lat) == 3);
        const auto v = component_of(lat, {{{2, 1}, {2, 2}}, {{2, 2}, {2, 3}}, {{2, 3}, {2, 4}}});
        CHECK(component_diameter(v, lat) == 0);
        const auto l = component_of(lat, {{{1, 1}, {1, 2}}, {{1, 1}, {2, 1}}, {{2, 1}, {3, 1}}});
        CHECK(component_diameter(l, lat) == 2);
        CHECK_THROWS(component_diameter(LatticeComponent{}, lat));
    }

    TEST_CASE("neighbouring vertices: linear 2n+2, single edge 6")
    {
        const Lattice lat({0.0, 0.0}, 1.0, 10, 10);
        const auto one = component_of(lat, {{{4, 4}, {5, 4}}});
        CHECK(neighboring_vertices(one, lat) == 6);
        for (long n = 2; n <= 6; ++n) {
            std::vector<std::pair<VertexCoord, VertexCoord>> e;
            for (long k = 0; k + 1 < n; ++k) e.push_back({{2 + k, 5}, {3 + k, 5}});
            const auto c = component_of(lat, e);
            CHECK(c.size == static_cast<std::size_t>(n));
            CHECK(neighboring_vertices(c, lat) == static_cast<std::size_t>(2 * n + 2));
        }
    }

    TEST_CASE("six-vertex component on the lattice border has nine neighbouring vertices")
    {
        // An interior 6-vertex component always has at least 10 neighbours;
        // the 9 is reached on the bottom border where the row below is outside.
        const Lattice lat({0.0, 0.0}, 1.0, 10, 10);
        // 2x2 block resting on the bottom row with a two-edge vertical tail
        const auto c = component_of(lat, {{{1, 0}, {2, 0}}, {{1, 0}, {1, 1}}, {{2, 0}, {2, 1}}, {{1, 1}, {2, 1}},
                                          {{2, 1}, {2, 2}}, {{2, 2}, {2, 3}}});
        CHECK(c.size == 6);
        CHECK(c.touches_border);
        CHECK(neighboring_vertices(c, lat) == 9);
    }

    TEST_CASE("neighbouring bound holds for every interior component")
    {
        for (int s = 0; s < 30; ++s) {
            const Region region{20.0, 20.0, {}};
            const auto pts = sample_ppp(0.5 + 0.07 * s, region, 500 + s);
            const auto lat = build_lattice(region, 1.0);
            const auto comps = connected_components(occupy_edges(lat, pts, activate(pts, 0.5, 1, s)));
            for (const auto& c : comps.components) {
                if (!c.touches_border) CHECK(c.neighbouring <= 2 * c.size + 2);
            }
        }
    }

    TEST_CASE("point_in_component_area")
    {
        const Lattice lat({0.0, 0.0}, 1.0, 6, 6);
        const auto c = component_of(lat, {{{2, 2}, {3, 2}}, {{3, 2}, {3, 3}}});
        for (auto e : c.edges) CHECK(point_in_component_area(lat.midpoint(e), c, lat));
        const Point m1 = lat.midpoint(c.edges[0]), m2 = lat.midpoint(c.edges[1]);
        const Point far{0.5, 5.5};
        CHECK(std::hypot(far.x - m1.x, far.y - m1.y) >= 1.0);
        CHECK(std::hypot(far.x - m2.x, far.y - m2.y) >= 1.0);
        CHECK_FALSE(point_in_component_area(far, c, lat));
    }

    TEST_CASE("cluster mapping: singleton and in-range triple")
    {
        const Region region{6.0, 6.0, {}};
        const auto lat = build_lattice(region, 1.0);
        const auto one = points_in(region, {{2.5, 2.1}});
        const auto occ1 = occupy_edges(lat, one);
        const auto comps1 = connected_components(occ1);
        REQUIRE(lat.edges_covering(one.positions[0]).size() == 1);
        const auto idx = map_cluster_to_component(Cluster{{0}, 1}, one, occ1, comps1);
        CHECK(comps1.edge_component[lat.edges_covering(one.positions[0])[0]] == static_cast<std::int32_t>(idx));

        const auto tri = points_in(region, {{2.5, 2.1}, {3.0, 2.4}, {2.9, 1.7}});
        const auto occ3 = occupy_edges(lat, tri);
        const auto comps3 = connected_components(occ3);
        const auto cl = clusters(build_instantaneous_graph(tri, all_active(tri), 1.0));
        REQUIRE(cl.size() == 1);
        CHECK(cluster_component_candidates(cl[0], tri, occ3, comps3).size() == 1);
        CHECK_NOTHROW(map_cluster_to_component(cl[0], tri, occ3, comps3));
    }

    TEST_CASE("straddling pair: linked nodes whose circles share no vertex")
    {
        // Documented counterexample to unique mapping: |AB| = r0 but the
        // occupied edges are the bottom and middle horizontal edges of a column.
        const Region region{4.0, 4.0, {}};
        const auto lat = build_lattice(region, 1.0);
        const auto pts = points_in(region, {{1.5, 1.25}, {1.5, 2.25}});
        const auto occ = occupy_edges(lat, pts);
        const auto comps = connected_components(occ);
        const auto cl = clusters(build_instantaneous_graph(pts, all_active(pts), 1.0));
        REQUIRE(cl.size() == 1);
        CHECK(cluster_component_candidates(cl[0], pts, occ, comps).size() == 2);
        CHECK_THROWS_AS(map_cluster_to_component(cl[0], pts, occ, comps), ModelViolation);
    }

    TEST_CASE("interior occupied fraction and size pmf")
    {
        const Lattice lat({0.0, 0.0}, 1.0, 3, 3);
        std::size_t interior = 0;
        for (std::size_t e = 0; e < lat.edge_count(); ++e) interior += lat.is_interior_edge(e);
        // 3x3 cells: horizontal rows 1..2 (6) plus vertical columns 1..2 (6)
        CHECK(interior == 12);

        std::vector<std::uint8_t> occ(lat.edge_count(), 0);
        occ[*lat.horizontal_edge(1, 1)] = 1;
        const auto o = occupancy_from(lat, occ);
        CHECK(interior_occupied_fraction(o) == doctest::Approx(1.0 / 12.0));
        const auto pmf = component_size_pmf_per_edge(connected_components(o), lat, 5);
        REQUIRE(pmf.size() == 6);
        CHECK(pmf[2] == doctest::Approx(1.0 / 12.0));
        CHECK(pmf[3] == 0.0);
    }
}
