// Serial reference vs OpenMP kernels: edge occupancy, graph build, trial batch.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include <omp.h>

#include "reldelay/config.hpp"
#include "reldelay/lattice.hpp"
#include "reldelay/random.hpp"
#include "reldelay/simulator.hpp"

using namespace reldelay;

namespace {

double time_ms(const std::function<void()>& fn, int reps)
{
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial, double parallel, bool same)
{
    std::printf("%-22s serial %9.3f ms  parallel %9.3f ms  speedup %5.2fx  %s\n", name, serial, parallel,
                serial / parallel, same ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv)
{
    const double side = argc > 1 ? std::atof(argv[1]) : 60.0;
    const double lambda = 2.0;
    std::printf("threads %d, region %gx%g, lambda %g\n", omp_get_max_threads(), side, side, lambda);

    const Region region{side, side, {0.0, 0.0}};
    const PointSet points = sample_ppp(lambda, region, 7);
    const ActivityMask active = activate(points, 0.5, 1, 11);
    const Lattice lattice = build_lattice(region, 1.0);

    EdgeOccupancy occ_s, occ_p;
    const double occ_serial = time_ms([&] { occ_s = occupy_edges_reference(lattice, points, active); }, 5);
    const double occ_parallel = time_ms([&] { occ_p = occupy_edges(lattice, points, active); }, 5);
    report("edge occupancy", occ_serial, occ_parallel, occ_s.occupied == occ_p.occupied);

    InstantaneousGraph g_s, g_p;
    const int graph_reps = side > 80 ? 1 : 3;
    const double g_serial =
        time_ms([&] { g_s = build_instantaneous_graph_reference(points, active, 1.0, 1); }, graph_reps);
    const double g_parallel = time_ms([&] { g_p = build_instantaneous_graph(points, active, 1.0, 1); }, graph_reps);
    report("instantaneous graph", g_serial, g_parallel, g_s == g_p);

    NetworkConfig cfg;
    cfg.region = {20.0, 20.0, {0.0, 0.0}};
    const PointSet net = sample_ppp(2.4, cfg.region, 3);
    std::vector<FloodContext> contexts;
    contexts.emplace_back(net, cfg.r0, cfg.q(), cfg.resolved_max_slots());
    std::vector<TrialTask> tasks;
    for (const auto& pair : select_pairs(net, 40, 5)) tasks.push_back({0, 0, pair, rng::derive(9, tasks.size())});

    std::vector<DelayTrialResult> r_s, r_p;
    const double t_serial = time_ms([&] { r_s = run_trials_serial(contexts, tasks); }, 1);
    const double t_parallel = time_ms([&] { r_p = run_trials(contexts, tasks); }, 1);
    report("flood trial batch", t_serial, t_parallel, r_s == r_p);
    return 0;
}
