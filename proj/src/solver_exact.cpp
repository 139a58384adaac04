#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "json.hpp"
#include "mrseq/solver.hpp"
#include "solver_flat.hpp"

namespace mrseq {

using nlohmann::json;

namespace {

using detail::Flat;
using detail::cheapest_in_arc;
using detail::kInf;
using detail::kTol;
using detail::route_feasible;

// ---------------------------------------------------------------------------
// brute force
// ---------------------------------------------------------------------------

struct BruteState {
    const Flat& f;
    std::vector<int> unassigned;          // micro positions, ascending id
    std::vector<std::vector<int>> routes; // micro positions per route
    std::vector<std::vector<bool>> dumps; // CS: dump after position i of route
    double best_cost = kInf;
    RoutingPlan best_plan;
    bool found = false;
    std::uint64_t plans_checked = 0;
};

RoutingPlan assemble_plan(const Flat& f, const std::vector<std::vector<int>>& routes,
                          const std::vector<std::vector<bool>>& dumps) {
    RoutingPlan plan;
    for (size_t r = 0; r < routes.size(); ++r)
        plan.routes.push_back(detail::expand_route(f, routes[r], dumps[r]));
    return plan;
}

void consider_plan(BruteState& st) {
    ++st.plans_checked;
    double total = 0.0;
    for (size_t r = 0; r < st.routes.size(); ++r) {
        double cost;
        if (!route_feasible(st.f, st.routes[r], st.dumps[r], cost)) return;
        total += cost;
    }
    if (total < st.best_cost - kTol) {
        st.best_cost = total;
        st.best_plan = assemble_plan(st.f, st.routes, st.dumps);
        st.found = true;
    }
}

void enumerate_plans(BruteState& st);

// All orderings of the chosen subset, then for CS all dump patterns.
void permute_and_recurse(BruteState& st, std::vector<int>& block, size_t fixed) {
    if (fixed == block.size()) {
        st.routes.push_back(block);
        st.dumps.emplace_back(block.size(), false);
        if (st.f.landfill >= 0 && block.size() > 1) {
            // dump pattern = subset of the gaps after each non-final micro
            const size_t gaps = block.size() - 1;
            for (size_t pattern = 0; pattern < (size_t{1} << gaps); ++pattern) {
                for (size_t g = 0; g < gaps; ++g) st.dumps.back()[g] = (pattern >> g) & 1;
                enumerate_plans(st);
            }
        } else {
            enumerate_plans(st);
        }
        st.routes.pop_back();
        st.dumps.pop_back();
        return;
    }
    for (size_t i = fixed; i < block.size(); ++i) {
        std::swap(block[fixed], block[i]);
        permute_and_recurse(st, block, fixed + 1);
        std::swap(block[fixed], block[i]);
    }
}

// Choose the member set of the next route: it must contain the smallest
// unassigned micro-route, which kills route-permutation symmetry.
void choose_block(BruteState& st, size_t next, std::vector<int>& block,
                  std::vector<int>& rest) {
    if (next == st.unassigned.size()) {
        if (block.empty()) return;
        std::vector<int> saved_unassigned = std::move(st.unassigned);
        st.unassigned = rest;
        std::vector<int> b = block;
        permute_and_recurse(st, b, 0);
        st.unassigned = std::move(saved_unassigned);
        return;
    }
    block.push_back(st.unassigned[next]);
    choose_block(st, next + 1, block, rest);
    block.pop_back();
    if (!block.empty()) {  // the first element is mandatory
        rest.push_back(st.unassigned[next]);
        choose_block(st, next + 1, block, rest);
        rest.pop_back();
    }
}

void enumerate_plans(BruteState& st) {
    if (st.unassigned.empty()) {
        consider_plan(st);
        return;
    }
    std::vector<int> block, rest;
    choose_block(st, 0, block, rest);
}

}  // namespace

SolveResult solve_brute_force(const Instance& instance) {
    if (instance.micro_count() > 7)
        throw TooLarge("brute force is limited to 7 micro-routes, got " +
                       std::to_string(instance.micro_count()));
    const auto start = std::chrono::steady_clock::now();

    Flat f(instance);
    BruteState st{f, {}, {}, {}, kInf, {}, false, 0};
    st.unassigned = f.by_id;

    if (f.n == 0) {
        st.found = true;
        st.best_cost = 0.0;
        st.best_plan = {};
    } else {
        enumerate_plans(st);
    }

    SolveResult result;
    result.nodes_explored = st.plans_checked;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (st.found) {
        result.status = SolveStatus::Optimal;
        result.plan = st.best_plan;
        result.objective = st.best_cost;
        result.lower_bound = st.best_cost;
        result.gap = 0.0;
    } else {
        result.status = SolveStatus::Infeasible;
        result.objective = std::numeric_limits<double>::quiet_NaN();
        result.lower_bound = std::numeric_limits<double>::quiet_NaN();
        result.gap = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

double root_lower_bound(const Instance& instance) {
    Flat f(instance);
    double bound = 0.0;
    for (int m = 0; m < f.n; ++m) bound += cheapest_in_arc(f, m);
    return bound;
}

// ---------------------------------------------------------------------------
// branch and bound
// ---------------------------------------------------------------------------

namespace {

struct BnB {
    const Flat& f;
    SolveLimits limits;
    std::chrono::steady_clock::time_point start;

    std::vector<double> min_in;     // by micro position
    int max_routes = 0;

    double incumbent_cost = kInf;
    RoutingPlan incumbent_plan;
    bool found = false;

    std::uint64_t nodes = 0;
    bool aborted = false;
    double frontier_bound = kInf;

    std::vector<Route> current_routes;  // construction under the current path

    explicit BnB(const Flat& flat) : f(flat) {}

    bool limit_hit() {
        if (limits.max_nodes && nodes >= limits.max_nodes) return true;
        if (limits.max_seconds > 0.0 && (nodes & 1023) == 0) {
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
            if (elapsed >= limits.max_seconds) return true;
        }
        return false;
    }

    double remaining_bound(std::uint32_t visited) const {
        double sum = 0.0;
        for (int m = 0; m < f.n; ++m)
            if (!(visited & (1u << m))) sum += min_in[m];
        return sum;
    }

    int smallest_unvisited(std::uint32_t visited) const {
        for (int m : f.by_id)
            if (!(visited & (1u << m))) return m;
        return -1;
    }

    void record_incumbent(double cost) {
        incumbent_cost = cost;
        incumbent_plan.routes = current_routes;
        found = true;
    }

    // One expansion of a search state. `pos` is the current stop; -1 means a
    // new route must be opened. `pending` is the micro the open route still
    // owes a visit to (route-ordering symmetry break), -1 once satisfied.
    void expand(std::uint32_t visited, int pos, double load, double time, double cost,
                int routes_used, int pending, double node_bound) {
        if (aborted) {
            frontier_bound = std::min(frontier_bound, node_bound);
            return;
        }
        ++nodes;
        if (limit_hit()) {
            aborted = true;
            frontier_bound = std::min(frontier_bound, node_bound);
            return;
        }

        const bool all_visited = visited == (f.n ? (1u << f.n) - 1 : 0u);

        if (pos < 0) {
            // open the next route; it must eventually cover the smallest
            // unvisited micro-route
            if (all_visited) return;  // closed state handled at close time
            if (routes_used >= max_routes) return;
            const int owed = smallest_unvisited(visited);
            std::vector<int> candidates = order_extensions(f.depot, visited);
            for (int m : candidates) {
                open_route(visited, m, cost, routes_used, owed);
            }
            return;
        }

        // candidate extensions, nearest first
        for (int m : order_extensions(pos, visited)) {
            const double leg_d = f.d(pos, f.stop_of_micro[m]);
            const double leg_t = f.h(pos, f.stop_of_micro[m]) + f.s[m];
            if (load + f.q[m] > f.Q + kTol) continue;
            if (time + leg_t > f.T + kTol) continue;
            const double child_cost = cost + leg_d;
            const double child_bound = child_cost + remaining_bound(visited | (1u << m));
            if (child_bound >= incumbent_cost - kTol) continue;
            current_routes.back().push_back(Stop::micro(f.inst->micro_routes[m].id));
            expand(visited | (1u << m), f.stop_of_micro[m], load + f.q[m], time + leg_t,
                   child_cost, routes_used, pending == m ? -1 : pending, child_bound);
            current_routes.back().pop_back();
        }

        const bool at_micro =
            pos != f.depot && (f.landfill < 0 || pos != f.landfill);

        // intermediate unload; also offered at zero load so the search covers
        // exactly the plan family the exhaustive oracle enumerates
        if (f.landfill >= 0 && at_micro) {
            const double leg_t = f.h(pos, f.landfill);
            const double child_cost = cost + f.d(pos, f.landfill);
            const double child_bound = child_cost + remaining_bound(visited);
            if (time + leg_t <= f.T + kTol && child_bound < incumbent_cost - kTol) {
                current_routes.back().push_back(Stop::landfill());
                expand(visited, f.landfill, 0.0, time + leg_t, child_cost, routes_used,
                       pending, child_bound);
                current_routes.back().pop_back();
            }
        }

        // close the route (micro -> [landfill ->] depot)
        if (at_micro && pending < 0) {
            double close_d, close_t;
            if (f.landfill >= 0) {
                close_d = f.d(pos, f.landfill) + f.d(f.landfill, f.depot);
                close_t = f.h(pos, f.landfill) + f.h(f.landfill, f.depot);
            } else {
                close_d = f.d(pos, f.depot);
                close_t = f.h(pos, f.depot);
            }
            if (time + close_t <= f.T + kTol) {
                const double child_cost = cost + close_d;
                if (all_visited) {
                    if (child_cost < incumbent_cost - kTol) {
                        finish_route();
                        record_incumbent(child_cost);
                        unfinish_route();
                    }
                } else {
                    const double child_bound = child_cost + remaining_bound(visited);
                    if (child_bound < incumbent_cost - kTol) {
                        finish_route();
                        current_routes.emplace_back();
                        expand(visited, -1, 0.0, 0.0, child_cost, routes_used, -1,
                               child_bound);
                        current_routes.pop_back();
                        unfinish_route();
                    }
                }
            }
        }
    }

    void open_route(std::uint32_t visited, int m, double cost, int routes_used, int owed) {
        const double leg_d = f.d(f.depot, f.stop_of_micro[m]);
        const double leg_t = f.h(f.depot, f.stop_of_micro[m]) + f.s[m];
        if (f.q[m] > f.Q + kTol) return;
        if (leg_t > f.T + kTol) return;
        const double child_cost = cost + leg_d;
        const double child_bound = child_cost + remaining_bound(visited | (1u << m));
        if (child_bound >= incumbent_cost - kTol) return;
        current_routes.back().push_back(Stop::depot());
        current_routes.back().push_back(Stop::micro(f.inst->micro_routes[m].id));
        expand(visited | (1u << m), f.stop_of_micro[m], f.q[m], leg_t, child_cost,
               routes_used + 1, owed == m ? -1 : owed, child_bound);
        current_routes.back().clear();
    }

    void finish_route() {
        if (f.landfill >= 0) current_routes.back().push_back(Stop::landfill());
        current_routes.back().push_back(Stop::depot());
    }

    void unfinish_route() {
        current_routes.back().pop_back();
        if (f.landfill >= 0) current_routes.back().pop_back();
    }

    std::vector<int> order_extensions(int pos, std::uint32_t visited) const {
        std::vector<int> candidates;
        for (int m : f.by_id)
            if (!(visited & (1u << m))) candidates.push_back(m);
        std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
            const double da = f.d(pos, f.stop_of_micro[a]);
            const double db = f.d(pos, f.stop_of_micro[b]);
            if (da != db) return da < db;
            return f.inst->micro_routes[a].id < f.inst->micro_routes[b].id;
        });
        return candidates;
    }
};

}  // namespace

SolveResult solve_exact(const Instance& instance, const SolveLimits& limits) {
    const auto start = std::chrono::steady_clock::now();
    Flat f(instance);
    BnB bnb(f);
    bnb.limits = limits;
    bnb.start = start;
    bnb.max_routes = instance.has_landfill() ? instance.routes_cap() : f.n;
    for (int m = 0; m < f.n; ++m) bnb.min_in.push_back(cheapest_in_arc(f, m));

    SolveResult result;
    if (f.n == 0) {
        result.status = SolveStatus::Optimal;
        result.plan = RoutingPlan{};
        result.objective = result.lower_bound = result.gap = 0.0;
        result.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return result;
    }

    const double root_bound = bnb.remaining_bound(0);
    bnb.current_routes.emplace_back();
    bnb.expand(0, -1, 0.0, 0.0, 0.0, 0, -1, root_bound);

    result.nodes_explored = bnb.nodes;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!bnb.aborted) {
        if (bnb.found) {
            result.status = SolveStatus::Optimal;
            result.plan = bnb.incumbent_plan;
            result.objective = bnb.incumbent_cost;
            result.lower_bound = bnb.incumbent_cost;
            result.gap = 0.0;
        } else {
            result.status = SolveStatus::Infeasible;
            result.objective = std::numeric_limits<double>::quiet_NaN();
            result.lower_bound = std::numeric_limits<double>::quiet_NaN();
            result.gap = std::numeric_limits<double>::quiet_NaN();
        }
        return result;
    }

    if (bnb.found) {
        const double lb = std::min(bnb.frontier_bound, bnb.incumbent_cost);
        result.plan = bnb.incumbent_plan;
        result.objective = bnb.incumbent_cost;
        result.lower_bound = lb;
        if (lb >= bnb.incumbent_cost - kTol) {  // frontier proves the incumbent
            result.status = SolveStatus::Optimal;
            result.lower_bound = bnb.incumbent_cost;
            result.gap = 0.0;
        } else {
            result.status = SolveStatus::FeasibleBound;
            result.gap = bnb.incumbent_cost > 0.0
                             ? (bnb.incumbent_cost - lb) / bnb.incumbent_cost
                             : 0.0;
        }
    } else {
        result.status = SolveStatus::LimitReached;
        result.objective = std::numeric_limits<double>::quiet_NaN();
        result.lower_bound = bnb.frontier_bound;
        result.gap = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::FeasibleBound: return "feasible_bound";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::LimitReached: return "limit_reached";
    }
    return "?";
}

std::string save_solve_result(const SolveResult& result) {
    json j;
    j["status"] = to_string(result.status);
    j["objective"] = std::isnan(result.objective) ? json(nullptr) : json(result.objective);
    j["lower_bound"] =
        std::isnan(result.lower_bound) ? json(nullptr) : json(result.lower_bound);
    j["gap"] = std::isnan(result.gap) ? json(nullptr) : json(result.gap);
    j["nodes_explored"] = result.nodes_explored;
    if (result.plan) j["plan"] = json::parse(save_plan(*result.plan));
    return j.dump(2) + "\n";
}

}  // namespace mrseq
