#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "reldelay/geometry.hpp"
#include "reldelay/lattice.hpp"

namespace oracle {

using Partition = std::set<std::vector<std::uint32_t>>;

/// All-pairs BFS over active nodes; every part is a sorted member list.
inline Partition bfs_clusters(const reldelay::PointSet& pts, const reldelay::ActivityMask& active, double range)
{
    const std::size_t n = pts.size();
    std::vector<char> seen(n, 0);
    Partition out;
    for (std::size_t s = 0; s < n; ++s) {
        if (!active[s] || seen[s]) continue;
        std::vector<std::uint32_t> part;
        std::queue<std::size_t> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty()) {
            const auto i = q.front();
            q.pop();
            part.push_back(static_cast<std::uint32_t>(i));
            for (std::size_t j = 0; j < n; ++j) {
                if (seen[j] || !active[j]) continue;
                const double dx = pts.positions[i].x - pts.positions[j].x;
                const double dy = pts.positions[i].y - pts.positions[j].y;
                if (std::sqrt(dx * dx + dy * dy) <= range) {
                    seen[j] = 1;
                    q.push(j);
                }
            }
        }
        std::sort(part.begin(), part.end());
        out.insert(part);
    }
    return out;
}

/// Edge endpoints computed from grid coordinates, independent of the Lattice id helpers.
inline std::pair<long, long> edge_vertices(long cols, long rows, long e)
{
    const long horizontal = cols * (rows + 1);
    if (e < horizontal) {
        const long j = e / cols, i = e % cols;
        return {j * (cols + 1) + i, j * (cols + 1) + i + 1};
    }
    const long v = e - horizontal;
    const long j = v / (cols + 1), i = v % (cols + 1);
    return {j * (cols + 1) + i, (j + 1) * (cols + 1) + i};
}

using EdgePartition = std::set<std::vector<std::size_t>>;

/// BFS over occupied edges, two edges adjacent when they share an endpoint.
inline EdgePartition bfs_components(long cols, long rows, const std::vector<std::uint8_t>& occupied)
{
    const long m = static_cast<long>(occupied.size());
    std::vector<char> seen(occupied.size(), 0);
    EdgePartition out;
    for (long s = 0; s < m; ++s) {
        if (!occupied[s] || seen[s]) continue;
        std::vector<std::size_t> part;
        std::queue<long> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty()) {
            const long e = q.front();
            q.pop();
            part.push_back(static_cast<std::size_t>(e));
            const auto [a, b] = edge_vertices(cols, rows, e);
            for (long f = 0; f < m; ++f) {
                if (seen[f] || !occupied[f]) continue;
                const auto [c, d] = edge_vertices(cols, rows, f);
                if (a == c || a == d || b == c || b == d) {
                    seen[f] = 1;
                    q.push(f);
                }
            }
        }
        std::sort(part.begin(), part.end());
        out.insert(part);
    }
    return out;
}

using big = boost::multiprecision::cpp_bin_float_50;

/// p_bar_n for n = 2..n_max in 50-digit arithmetic (index n).
inline std::vector<big> pbar_mp(const big& p, std::size_t n_max)
{
    std::vector<big> out(n_max + 1, big(0));
    if (n_max < 2) return out;
    out[2] = p;
    for (std::size_t n = 3; n <= n_max; ++n) {
        const big two_np = 2 * big(n) * p;
        out[n] = out[n - 1] * two_np / (two_np + p + 1);
    }
    return out;
}

inline big expected_size_mp(const big& p, std::size_t n_max)
{
    const auto pb = pbar_mp(p, n_max);
    big sum = 1;
    for (std::size_t n = 2; n <= n_max; ++n) sum += big(n) * pb[n];
    return sum;
}

/// E_D(n) straight from the double sum over k and a, in 50-digit arithmetic.
inline big expected_diameter_mp(std::size_t n)
{
    using boost::multiprecision::pow;
    if (n < 2) return 0;
    std::vector<big> binom(n, big(0));  // C(n-1, a)
    binom[0] = 1;
    for (std::size_t a = 1; a < n; ++a) binom[a] = binom[a - 1] * big(n - a) / big(a);
    const big scale = pow(big(2), -static_cast<int>(n - 1));
    big total = 0;
    for (std::size_t k = 1; k < n; ++k) {
        big inner = 0;
        for (std::size_t a = k; a < n; ++a) inner += binom[a] * pow(big(k), -static_cast<int>(a - k));
        total += big(k) * inner * scale;
    }
    return total;
}

/// h(a) = sum_{k=1}^{a} k^{k+1-a}, so that E_D(n) = sum_a C(n-1,a) 2^{-(n-1)} h(a).
/// The exponent (k+1-a) ln k is convex in k, so terms fall from both ends
/// towards a single valley; summing inward from each end until a term drops
/// below 1e-40 of the running total leaves less than a * 1e-40 unsummed.
inline std::vector<long double> h_table(std::size_t a_max)
{
    auto term = [](std::size_t k, std::size_t a) {
        const long double e = static_cast<long double>(k) + 1.0L - static_cast<long double>(a);
        return std::pow(static_cast<long double>(k), e);
    };
    std::vector<long double> h(a_max + 1, 0.0L);
    for (std::size_t a = 1; a <= a_max; ++a) {
        long double s = 0.0L;
        std::size_t lo = 1, hi = a;
        bool lo_live = true, hi_live = true;
        while (lo <= hi && (lo_live || hi_live)) {
            if (hi_live) {
                const long double t = term(hi, a);
                s += t;
                hi_live = t > 1e-40L * s;
                --hi;
            }
            if (lo <= hi && lo_live) {
                const long double t = term(lo, a);
                s += t;
                lo_live = t > 1e-40L * s;
                ++lo;
            }
        }
        h[a] = s;
    }
    return h;
}

/// E_D(n) for n = 0..n_max via the swapped-order identity, in long double.
inline std::vector<long double> expected_diameter_ld(std::size_t n_max)
{
    const auto h = h_table(n_max);
    std::vector<long double> out(n_max + 1, 0.0L);
    for (std::size_t n = 2; n <= n_max; ++n) {
        long double b = std::ldexp(1.0L, -static_cast<int>(n - 1));  // C(n-1,0) 2^-(n-1)
        long double s = 0.0L;
        for (std::size_t a = 1; a < n; ++a) {
            b = b * static_cast<long double>(n - a) / static_cast<long double>(a);
            s += b * h[a];
        }
        out[n] = s;
    }
    return out;
}

inline long double global_diameter_ld(long double p, std::size_t n_max, const std::vector<long double>& ed)
{
    long double pb = p, sum = 0.0L;
    for (std::size_t n = 2; n <= n_max; ++n) {
        if (n > 2) {
            const long double two_np = 2.0L * static_cast<long double>(n) * p;
            pb = pb * two_np / (two_np + p + 1.0L);
        }
        sum += pb * ed[n];
    }
    return sum;
}

}  // namespace oracle
