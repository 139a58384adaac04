#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "mrseq/annealing.hpp"
#include "solver_flat.hpp"

namespace mrseq {

using detail::Flat;
using detail::kTol;

namespace {

struct SaRoute {
    std::vector<int> micros;   // micro positions
    std::vector<bool> dumps;   // dump after micros[i]; final dump implicit
};

struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}
    std::uint64_t next() { return engine(); }
    // uniform in [0, n)
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
    double unit() { return (next() >> 11) * 0x1.0p-53; }
};

double close_time(const Flat& f, int micro) {
    const int stop = f.stop_of_micro[micro];
    if (f.landfill >= 0) return f.h(stop, f.landfill) + f.h(f.landfill, f.depot);
    return f.h(stop, f.depot);
}

std::vector<SaRoute> construct(const Flat& f, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> unvisited = f.by_id;
    std::vector<SaRoute> routes;
    SaRoute current;
    double load = 0.0, time = 0.0;
    int pos = f.depot;
    bool pending_dump = false;  // landfill visit sits in the next gap

    auto close_current = [&] {
        if (!current.micros.empty()) routes.push_back(std::move(current));
        current = {};
        load = 0.0;
        time = 0.0;
        pos = f.depot;
        pending_dump = false;
    };

    while (!unvisited.empty()) {
        std::vector<int> fits;
        for (int m : unvisited) {
            if (load + f.q[m] > f.Q + kTol) continue;
            const int stop = f.stop_of_micro[m];
            if (time + f.h(pos, stop) + f.s[m] + close_time(f, m) > f.T + kTol) continue;
            fits.push_back(m);
        }
        if (!fits.empty()) {
            std::stable_sort(fits.begin(), fits.end(), [&](int a, int b) {
                const double da = f.d(pos, f.stop_of_micro[a]);
                const double db = f.d(pos, f.stop_of_micro[b]);
                if (da != db) return da < db;
                return f.id_of(a) < f.id_of(b);
            });
            const int chosen = fits.size() >= 2 && rng.below(2) == 1 ? fits[1] : fits[0];
            const int stop = f.stop_of_micro[chosen];
            time += f.h(pos, stop) + f.s[chosen];
            load += f.q[chosen];
            if (!current.micros.empty()) current.dumps.push_back(pending_dump);
            pending_dump = false;
            current.micros.push_back(chosen);
            pos = stop;
            unvisited.erase(std::find(unvisited.begin(), unvisited.end(), chosen));
            continue;
        }
        // capacity blocks everything: unload mid-route when that opens a fit
        if (f.landfill >= 0 && !current.micros.empty() && pos != f.landfill) {
            bool helps = false;
            for (int m : unvisited) {
                const int stop = f.stop_of_micro[m];
                if (time + f.h(pos, f.landfill) + f.h(f.landfill, stop) + f.s[m] +
                        close_time(f, m) <=
                    f.T + kTol) {
                    helps = true;
                    break;
                }
            }
            if (helps) {
                time += f.h(pos, f.landfill);
                load = 0.0;
                pos = f.landfill;
                pending_dump = true;
                continue;
            }
        }
        if (current.micros.empty()) {
            throw ConstructionFailed("micro-route " + std::to_string(f.id_of(unvisited[0])) +
                                     " does not fit an empty vehicle within the shift");
        }
        close_current();
    }
    close_current();
    return routes;
}

double plan_cost(const Flat& f, const std::vector<SaRoute>& routes) {
    double total = 0.0;
    for (const auto& r : routes) {
        double c;
        if (!detail::route_feasible(f, r.micros, r.dumps, c)) return detail::kInf;
        total += c;
    }
    return total;
}

RoutingPlan to_plan(const Flat& f, const std::vector<SaRoute>& routes) {
    RoutingPlan plan;
    for (const auto& r : routes) plan.routes.push_back(detail::expand_route(f, r.micros, r.dumps));
    return plan;
}

// ---------------------------------------------------------------------------
// moves
// ---------------------------------------------------------------------------

enum class MoveKind { Relocate, Swap, TwoOpt, DumpToggle, Merge, Split };

struct Proposal {
    // replaces routes[a] (and routes[b] if b >= 0) by the listed routes;
    // empty replacement removes the route
    int a = -1;
    int b = -1;
    std::vector<SaRoute> replacement;
};

void erase_micro(SaRoute& r, size_t idx) {
    const bool merged_gap =
        (idx > 0 && idx - 1 < r.dumps.size() && r.dumps[idx - 1]) ||
        (idx < r.dumps.size() && r.dumps[idx]);
    r.micros.erase(r.micros.begin() + idx);
    if (!r.dumps.empty()) {
        if (idx < r.dumps.size()) r.dumps.erase(r.dumps.begin() + idx);
        else r.dumps.pop_back();
        if (idx > 0 && idx - 1 < r.dumps.size()) r.dumps[idx - 1] = merged_gap;
    }
}

void insert_micro(SaRoute& r, size_t idx, int micro) {
    r.micros.insert(r.micros.begin() + idx, micro);
    if (r.micros.size() < 2) return;
    // splitting a gap keeps the dump on the left side; fresh gaps carry none
    const size_t at = std::min(idx, r.dumps.size());
    r.dumps.insert(r.dumps.begin() + at, false);
}

}  // namespace

namespace sa {

double two_opt_arc_delta(const Instance& instance, const std::vector<int>& micro_ids,
                         const std::vector<bool>& dump_after, size_t i, size_t j) {
    Flat f(instance);
    std::vector<int> micros;
    for (int id : micro_ids) micros.push_back(f.inst->micro_pos(id));

    auto stop = [&](size_t p) { return f.stop_of_micro[micros[p]]; };
    auto gap_dump = [&](size_t g) { return g < dump_after.size() && dump_after[g]; };
    // cost of the piece leaving micro position p toward the next node
    auto gap_cost = [&](int from_stop, bool dump, int to_stop) {
        return dump ? f.d(from_stop, f.landfill) + f.d(f.landfill, to_stop)
                    : f.d(from_stop, to_stop);
    };

    const size_t last = micros.size() - 1;
    // entry node: what precedes the segment (depot, landfill after a dump, or
    // the previous micro)
    const int entry =
        i == 0 ? f.depot : (gap_dump(i - 1) ? f.landfill : stop(i - 1));
    double before = f.d(entry, stop(i));
    double after = f.d(entry, stop(j));

    for (size_t g = i; g < j; ++g) {
        before += gap_cost(stop(g), gap_dump(g), stop(g + 1));
        // reversed pair occupying the same gap slot
        const size_t src = i + j - 1 - g;
        after += gap_cost(stop(i + j - g), gap_dump(src), stop(i + j - g - 1));
    }

    // exit: the arc into the next node; pieces beyond it are unchanged
    if (j == last) {
        const int exit_stop = f.landfill >= 0 ? f.landfill : f.depot;
        before += f.d(stop(j), exit_stop);
        after += f.d(stop(i), exit_stop);
    } else if (gap_dump(j)) {
        before += f.d(stop(j), f.landfill);
        after += f.d(stop(i), f.landfill);
    } else {
        before += f.d(stop(j), stop(j + 1));
        after += f.d(stop(i), stop(j + 1));
    }
    return after - before;
}

}  // namespace sa

namespace {

// reversal of micros[i..j] with the interior gap flags
void apply_two_opt(SaRoute& r, size_t i, size_t j) {
    std::reverse(r.micros.begin() + i, r.micros.begin() + j + 1);
    if (j > i && !r.dumps.empty())
        std::reverse(r.dumps.begin() + i, r.dumps.begin() + j);
}

struct SaRun {
    const Flat& f;
    Rng rng;
    std::vector<SaRoute> routes;
    std::vector<double> route_cost;
    double cost = 0.0;

    std::vector<SaRoute> best_routes;
    double best_cost = detail::kInf;
    std::uint64_t moves_proposed = 0;

    SaRun(const Flat& flat, std::uint64_t seed) : f(flat), rng(seed) {}

    void reset_costs() {
        route_cost.clear();
        cost = 0.0;
        for (const auto& r : routes) {
            double c;
            detail::route_feasible(f, r.micros, r.dumps, c);
            route_cost.push_back(c);
            cost += c;
        }
    }

    std::pair<int, size_t> locate_micro(size_t global_idx) const {
        size_t seen = 0;
        for (size_t r = 0; r < routes.size(); ++r) {
            if (global_idx < seen + routes[r].micros.size())
                return {static_cast<int>(r), global_idx - seen};
            seen += routes[r].micros.size();
        }
        return {-1, 0};
    }

    size_t micro_total() const {
        size_t total = 0;
        for (const auto& r : routes) total += r.micros.size();
        return total;
    }

    std::vector<MoveKind> applicable() const {
        std::vector<MoveKind> kinds;
        const size_t n = micro_total();
        bool long_route = false;
        for (const auto& r : routes)
            if (r.micros.size() >= 2) long_route = true;
        if (n >= 2) kinds.push_back(MoveKind::Relocate);
        if (n >= 2) kinds.push_back(MoveKind::Swap);
        if (long_route) kinds.push_back(MoveKind::TwoOpt);
        if (f.landfill >= 0 && long_route) kinds.push_back(MoveKind::DumpToggle);
        if (routes.size() >= 2) kinds.push_back(MoveKind::Merge);
        if (long_route) kinds.push_back(MoveKind::Split);
        return kinds;
    }

    bool propose(Proposal& p) {
        const auto kinds = applicable();
        if (kinds.empty()) return false;
        switch (kinds[rng.below(kinds.size())]) {
            case MoveKind::Relocate: return propose_relocate(p);
            case MoveKind::Swap: return propose_swap(p);
            case MoveKind::TwoOpt: return propose_two_opt(p);
            case MoveKind::DumpToggle: return propose_dump_toggle(p);
            case MoveKind::Merge: return propose_merge(p);
            case MoveKind::Split: return propose_split(p);
        }
        return false;
    }

    bool propose_relocate(Proposal& p) {
        const auto [src, idx] = locate_micro(rng.below(micro_total()));
        const int micro = routes[src].micros[idx];
        const int dst = static_cast<int>(rng.below(routes.size()));
        SaRoute from = routes[src];
        erase_micro(from, idx);
        if (src == dst) {
            if (from.micros.empty()) return false;
            const size_t at = rng.below(from.micros.size() + 1);
            insert_micro(from, at, micro);
            p = {src, -1, {from}};
        } else {
            SaRoute to = routes[dst];
            const size_t at = rng.below(to.micros.size() + 1);
            insert_micro(to, at, micro);
            p.a = src;
            p.b = dst;
            p.replacement.clear();
            if (!from.micros.empty()) p.replacement.push_back(from);
            p.replacement.push_back(to);
        }
        return true;
    }

    bool propose_swap(Proposal& p) {
        const size_t n = micro_total();
        const size_t g1 = rng.below(n);
        size_t g2 = rng.below(n - 1);
        if (g2 >= g1) ++g2;
        const auto [r1, i1] = locate_micro(g1);
        const auto [r2, i2] = locate_micro(g2);
        if (r1 == r2) {
            SaRoute r = routes[r1];
            std::swap(r.micros[i1], r.micros[i2]);
            p = {r1, -1, {r}};
        } else {
            SaRoute a = routes[r1], b = routes[r2];
            std::swap(a.micros[i1], b.micros[i2]);
            p = {r1, r2, {a, b}};
        }
        return true;
    }

    int pick_long_route() {
        std::vector<int> eligible;
        for (size_t r = 0; r < routes.size(); ++r)
            if (routes[r].micros.size() >= 2) eligible.push_back(static_cast<int>(r));
        if (eligible.empty()) return -1;
        return eligible[rng.below(eligible.size())];
    }

    bool propose_two_opt(Proposal& p) {
        const int r = pick_long_route();
        if (r < 0) return false;
        const size_t len = routes[r].micros.size();
        const size_t i = rng.below(len - 1);
        const size_t j = i + 1 + rng.below(len - i - 1);
        SaRoute next = routes[r];
        apply_two_opt(next, i, j);
        p = {r, -1, {next}};
        return true;
    }

    bool propose_dump_toggle(Proposal& p) {
        const int r = pick_long_route();
        if (r < 0) return false;
        SaRoute next = routes[r];
        next.dumps.resize(next.micros.size() - 1, false);
        const size_t g = rng.below(next.dumps.size());
        next.dumps[g] = !next.dumps[g];
        p = {r, -1, {next}};
        return true;
    }

    bool propose_merge(Proposal& p) {
        const size_t a = rng.below(routes.size());
        size_t b = rng.below(routes.size() - 1);
        if (b >= a) ++b;
        SaRoute merged = routes[a];
        merged.dumps.resize(merged.micros.empty() ? 0 : merged.micros.size() - 1, false);
        const bool junction_dump = f.landfill >= 0 && rng.below(2) == 1;
        if (!merged.micros.empty() && !routes[b].micros.empty())
            merged.dumps.push_back(junction_dump);
        for (size_t i = 0; i < routes[b].micros.size(); ++i) {
            merged.micros.push_back(routes[b].micros[i]);
            if (i + 1 < routes[b].micros.size())
                merged.dumps.push_back(i < routes[b].dumps.size() && routes[b].dumps[i]);
        }
        p = {static_cast<int>(a), static_cast<int>(b), {merged}};
        return true;
    }

    bool propose_split(Proposal& p) {
        const int r = pick_long_route();
        if (r < 0) return false;
        const auto& route = routes[r];
        const size_t cut = 1 + rng.below(route.micros.size() - 1);
        SaRoute head, tail;
        head.micros.assign(route.micros.begin(), route.micros.begin() + cut);
        tail.micros.assign(route.micros.begin() + cut, route.micros.end());
        for (size_t g = 0; g + 1 < route.micros.size(); ++g) {
            const bool flag = g < route.dumps.size() && route.dumps[g];
            if (g + 1 < cut) head.dumps.push_back(flag);
            else if (g >= cut) tail.dumps.push_back(flag);
        }
        p = {r, -1, {head, tail}};
        return true;
    }

    // evaluates and, when accepted, applies the proposal
    void step(double temperature) {
        ++moves_proposed;
        Proposal p;
        if (!propose(p)) return;

        double new_cost_sum = 0.0;
        for (const auto& r : p.replacement) {
            double c;
            if (!detail::route_feasible(f, r.micros, r.dumps, c)) return;  // reject
            new_cost_sum += c;
        }
        double old_cost_sum = route_cost[p.a];
        if (p.b >= 0) old_cost_sum += route_cost[p.b];
        const double delta = new_cost_sum - old_cost_sum;

        if (delta > 0 && rng.unit() >= std::exp(-delta / temperature)) return;

        // apply: rebuild the route list deterministically
        std::vector<SaRoute> next;
        std::vector<double> next_cost;
        for (size_t r = 0; r < routes.size(); ++r) {
            if (static_cast<int>(r) == p.a || static_cast<int>(r) == p.b) continue;
            next.push_back(routes[r]);
            next_cost.push_back(route_cost[r]);
        }
        for (const auto& r : p.replacement) {
            double c;
            detail::route_feasible(f, r.micros, r.dumps, c);
            next.push_back(r);
            next_cost.push_back(c);
        }
        routes = std::move(next);
        route_cost = std::move(next_cost);
        cost += delta;

        if (cost < best_cost - kTol) {
            best_cost = cost;
            best_routes = routes;
        }
    }
};

}  // namespace

RoutingPlan construct_initial(const Instance& instance, std::uint64_t seed) {
    Flat f(instance);
    return to_plan(f, construct(f, seed));
}

SolveResult solve_heuristic(const Instance& instance, const AnnealingParams& params) {
    if (params.cooling_rate <= 0.0 || params.cooling_rate >= 1.0)
        throw InvariantViolation("cooling_rate must be in (0,1)");
    if (params.min_temperature_km <= 0.0)
        throw InvariantViolation("min_temperature must be > 0");
    if (params.restarts < 1) throw InvariantViolation("restarts must be >= 1");

    const auto start = std::chrono::steady_clock::now();
    Flat f(instance);

    SolveResult result;
    result.lower_bound = root_lower_bound(instance);

    double overall_best = detail::kInf;
    std::vector<SaRoute> overall_routes;
    std::uint64_t total_moves = 0;
    bool any = false;

    for (int r = 0; r < params.restarts; ++r) {
        const std::uint64_t seed = params.seed + static_cast<std::uint64_t>(r);
        SaRun run(f, seed);
        try {
            run.routes = construct(f, seed);
        } catch (const ConstructionFailed&) {
            result.status = SolveStatus::Infeasible;
            result.objective = std::numeric_limits<double>::quiet_NaN();
            result.lower_bound = std::numeric_limits<double>::quiet_NaN();
            result.gap = std::numeric_limits<double>::quiet_NaN();
            result.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
            return result;
        }
        run.reset_costs();
        run.best_routes = run.routes;
        run.best_cost = run.cost;

        double temperature = params.initial_temperature_km > 0.0
                                 ? params.initial_temperature_km
                                 : std::max(0.1 * run.cost, 10.0 * params.min_temperature_km);
        const int moves_per_epoch =
            params.moves_per_epoch > 0 ? params.moves_per_epoch : 50 * std::max(f.n, 1);

        while (temperature > params.min_temperature_km) {
            for (int m = 0; m < moves_per_epoch; ++m) run.step(temperature);
            temperature *= params.cooling_rate;
        }
        total_moves += run.moves_proposed;

        // accumulated deltas can drift; judge restarts on exact recomputation
        const double exact_best = plan_cost(f, run.best_routes);
        if (!any || exact_best < overall_best - kTol) {
            overall_best = exact_best;
            overall_routes = run.best_routes;
            any = true;
        }
    }

    result.plan = to_plan(f, overall_routes);
    result.objective = overall_best;
    result.status = SolveStatus::FeasibleBound;
    result.gap = result.objective > 0.0
                     ? (result.objective - result.lower_bound) / result.objective
                     : 0.0;
    result.nodes_explored = total_moves;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace mrseq
