#pragma once

#include <cstdint>

#include "mrseq/instance.hpp"
#include "mrseq/plan.hpp"
#include "mrseq/solver.hpp"

namespace mrseq {

struct AnnealingParams {
    // 0 = derive as 10% of the construction objective
    double initial_temperature_km = 0.0;
    double cooling_rate = 0.97;          // per epoch, in (0,1)
    int moves_per_epoch = 0;             // 0 = derive as 50 * |M|
    double min_temperature_km = 1e-3;
    std::uint64_t seed = 1;
    int restarts = 4;                    // independent runs, seeds seed..seed+restarts-1
};

// Greedy nearest-feasible construction. The seed randomizes ties between the
// two nearest candidates; every output is feasible. Current-situation routes
// insert a landfill visit when capacity blocks every remaining micro-route
// and open a new route when nothing fits at all.
RoutingPlan construct_initial(const Instance& instance, std::uint64_t seed);

// Simulated annealing over relocate / swap / in-route 2-opt / landfill
// reposition / route merge and split. Infeasible neighbours are rejected
// outright. Deterministic per seed; restarts reduce by minimum objective
// with ties broken by lowest seed.
SolveResult solve_heuristic(const Instance& instance, const AnnealingParams& params = {});

namespace sa {
// Arc-cost change of reversing micros[i..j] inside one route, boundary and
// landfill-split arcs included. Exposed for the delta-vs-reevaluation check.
double two_opt_arc_delta(const Instance& instance, const std::vector<int>& micro_ids,
                         const std::vector<bool>& dump_after, size_t i, size_t j);
}  // namespace sa

}  // namespace mrseq
