#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mrseq/instance.hpp"
#include "mrseq/plan.hpp"

namespace mrseq {

enum class SolveStatus { Optimal, FeasibleBound, Infeasible, LimitReached };

std::string to_string(SolveStatus status);

struct SolveResult {
    std::optional<RoutingPlan> plan;
    double objective = 0.0;    // arc distance of `plan`
    double lower_bound = 0.0;  // proven bound on the optimal arc distance
    SolveStatus status = SolveStatus::Infeasible;
    double gap = 0.0;  // (objective - lower_bound) / objective
    std::uint64_t nodes_explored = 0;
    double wall_time_s = 0.0;
};

struct SolveLimits {
    std::uint64_t max_nodes = 0;  // 0 = unlimited
    double max_seconds = 0.0;     // 0 = unlimited
};

// Exhaustive enumeration of all plans: set partitions of the micro-routes
// into routes, every visiting order, and for the current-situation case every
// pattern of intermediate landfill visits with the mandatory final one.
// Returns the minimum-arc-distance feasible plan. Throws TooLarge beyond
// seven micro-routes.
SolveResult solve_brute_force(const Instance& instance);

// Depth-first branch and bound over partial route constructions. Prunes on
// capacity, time, and an admissible bound: cost so far plus each unvisited
// micro-route's cheapest incoming arc. Deterministic: nearest-feasible-first
// branching with ascending-id tie-breaks, routes opened in order of their
// smallest micro-route id.
SolveResult solve_exact(const Instance& instance, const SolveLimits& limits = {});

// Root relaxation value used as the reported bound by the heuristic.
double root_lower_bound(const Instance& instance);

// Machine form; wall time is process-dependent and deliberately left out.
std::string save_solve_result(const SolveResult& result);

}  // namespace mrseq
