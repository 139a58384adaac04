#include <random>

#include "doctest.h"
#include "mrseq/annealing.hpp"
#include "mrseq/evaluator.hpp"
#include "mrseq/milp.hpp"
#include "mrseq/solver.hpp"
#include "test_support.hpp"

using namespace mrseq;

namespace {

Route expand(const Instance& inst, const std::vector<int>& micro_ids,
             const std::vector<bool>& dumps) {
    Route route{Stop::depot()};
    for (size_t i = 0; i < micro_ids.size(); ++i) {
        route.push_back(Stop::micro(micro_ids[i]));
        const bool last = i + 1 == micro_ids.size();
        if (inst.has_landfill() && (last || (i < dumps.size() && dumps[i])))
            route.push_back(Stop::landfill());
    }
    route.push_back(Stop::depot());
    return route;
}

}  // namespace

TEST_CASE("construction returns the unique single-micro-route plan") {
    std::mt19937_64 rng(301);
    const Instance inst = test::random_instance(rng, 1, CaseKind::CurrentSituation);
    const RoutingPlan plan = construct_initial(inst, 42);
    REQUIRE(plan.routes.size() == 1);
    CHECK(sequence_string(plan.routes[0]) == "D-1-L-D");
}

TEST_CASE("fifty seeds, every construction feasible") {
    std::mt19937_64 rng(302);
    for (int trial = 0; trial < 5; ++trial) {
        const CaseKind kind =
            trial % 2 ? CaseKind::TransferStation : CaseKind::CurrentSituation;
        const Instance inst = test::random_instance(rng, 5 + trial % 3, kind);
        const int seeds = trial == 0 ? 50 : 10;
        for (std::uint64_t seed = 0; seed < static_cast<std::uint64_t>(seeds); ++seed) {
            const RoutingPlan plan = construct_initial(inst, seed);
            CHECK(evaluate_plan(inst, plan).feasible);
        }
    }
}

TEST_CASE("when everything fits one vehicle the construction uses one route") {
    test::CityBuilder b;
    b.kind = CaseKind::TransferStation;
    b.points = {{0, 0}, {1, 1}, {2, 0}, {3, 1}, {4, 0}};
    b.internal_km = {10.0, 10.0, 10.0, 10.0};
    b.waste_kg = {2000.0, 2000.0, 2000.0, 2000.0};
    b.time_limit = 40.0;
    b.transfer = TransferInfo{25000.0, 20.0};
    const Instance inst = b.build();
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const RoutingPlan plan = construct_initial(inst, seed);
        CHECK(plan.routes.size() == 1);
        CHECK(evaluate_plan(inst, plan).feasible);
    }
}

TEST_CASE("a micro-route that cannot fit an empty shift fails construction") {
    std::mt19937_64 rng(303);
    Instance inst = test::random_instance(rng, 2, CaseKind::CurrentSituation);
    inst.micro_routes[0].service_time_override_h = inst.time_limit_h * 2.0;
    CHECK_THROWS_AS(construct_initial(inst, 1), ConstructionFailed);
    CHECK(solve_heuristic(inst).status == SolveStatus::Infeasible);
}

TEST_CASE("zero-epoch schedule returns the construction unchanged") {
    std::mt19937_64 rng(304);
    const Instance inst = test::random_instance(rng, 5, CaseKind::CurrentSituation);
    AnnealingParams params;
    params.seed = 9;
    params.restarts = 1;
    params.initial_temperature_km = 1e-6;
    params.min_temperature_km = 1.0;  // above the initial temperature: no epochs
    const SolveResult result = solve_heuristic(inst, params);
    const RoutingPlan construction = construct_initial(inst, 9);
    REQUIRE(result.plan);
    CHECK(*result.plan == construction);
}

TEST_CASE("same seed, same result; the plan is always feasible") {
    std::mt19937_64 rng(305);
    for (int trial = 0; trial < 4; ++trial) {
        const CaseKind kind =
            trial % 2 ? CaseKind::TransferStation : CaseKind::CurrentSituation;
        const Instance inst = test::random_instance(rng, 6, kind);
        AnnealingParams params;
        params.seed = 100 + trial;
        params.restarts = 2;
        const SolveResult a = solve_heuristic(inst, params);
        const SolveResult b = solve_heuristic(inst, params);
        REQUIRE(a.plan);
        REQUIRE(b.plan);
        CHECK(*a.plan == *b.plan);
        CHECK(a.objective == b.objective);
        CHECK(a.nodes_explored == b.nodes_explored);
        CHECK(evaluate_plan(inst, *a.plan).feasible);
        CHECK(a.status == SolveStatus::FeasibleBound);
        CHECK(a.lower_bound <= a.objective + 1e-9);
    }
}

TEST_CASE("2-opt delta equals full re-evaluation") {
    std::mt19937_64 rng(306);
    for (int trial = 0; trial < 60; ++trial) {
        const CaseKind kind =
            trial % 2 ? CaseKind::TransferStation : CaseKind::CurrentSituation;
        Instance inst = test::random_instance(rng, 6, kind, false, true);
        inst.time_limit_h = 100.0;  // keep any reversal evaluable

        std::vector<int> ids{1, 2, 3, 4, 5, 6};
        std::shuffle(ids.begin(), ids.end(), rng);
        std::vector<bool> dumps;
        for (int g = 0; g < 5; ++g)
            dumps.push_back(inst.has_landfill() && rng() % 3 == 0);

        const size_t i = rng() % 5;
        const size_t j = i + 1 + rng() % (5 - i);
        const double delta = sa::two_opt_arc_delta(inst, ids, dumps, i, j);

        const RoutingPlan before{{expand(inst, ids, dumps)}};
        std::vector<int> rev_ids = ids;
        std::reverse(rev_ids.begin() + i, rev_ids.begin() + j + 1);
        std::vector<bool> rev_dumps = dumps;
        if (j > i) std::reverse(rev_dumps.begin() + i, rev_dumps.begin() + j);
        const RoutingPlan after{{expand(inst, rev_ids, rev_dumps)}};

        const double full = evaluate_plan(inst, after).total_arc_distance_km -
                            evaluate_plan(inst, before).total_arc_distance_km;
        CHECK(delta == doctest::Approx(full).epsilon(1e-9));
    }
}

TEST_CASE("best objective is non-increasing across epochs") {
    std::mt19937_64 rng(307);
    const Instance inst = test::random_instance(rng, 7, CaseKind::CurrentSituation);
    AnnealingParams params;
    params.seed = 5;
    params.restarts = 1;
    params.initial_temperature_km = 8.0;
    params.cooling_rate = 0.5;
    // truncating the schedule after k epochs replays the same move stream
    double previous = 1e100;
    for (int epochs = 1; epochs <= 5; ++epochs) {
        params.min_temperature_km =
            params.initial_temperature_km * std::pow(params.cooling_rate, epochs) * 1.001;
        const SolveResult result = solve_heuristic(inst, params);
        CHECK(result.objective <= previous + 1e-9);
        previous = result.objective;
    }
}

TEST_CASE("annealing lands close to the oracle on small instances") {
    std::mt19937_64 rng(308);
    int within = 0, total = 0;
    for (int trial = 0; trial < 12; ++trial) {
        const CaseKind kind =
            trial % 2 ? CaseKind::TransferStation : CaseKind::CurrentSituation;
        const Instance inst = test::random_instance(rng, 4 + trial % 3, kind, trial % 4 < 2);
        const SolveResult oracle = solve_brute_force(inst);
        REQUIRE(oracle.status == SolveStatus::Optimal);
        AnnealingParams params;
        params.seed = 1000 + trial;
        const SolveResult sa_result = solve_heuristic(inst, params);
        REQUIRE(sa_result.plan);
        CHECK(evaluate_plan(inst, *sa_result.plan).feasible);
        CHECK(sa_result.objective >= oracle.objective - 1e-9);
        ++total;
        if (sa_result.objective <= oracle.objective * 1.02 + 1e-9) ++within;
    }
    CHECK(within == total);  // 2% of optimum on every one of these small cases
}

TEST_CASE("heuristic plans induce feasible model assignments") {
    std::mt19937_64 rng(310);
    for (int trial = 0; trial < 4; ++trial) {
        const bool cs = trial % 2 == 0;
        const Instance inst = test::random_instance(
            rng, 5, cs ? CaseKind::CurrentSituation : CaseKind::TransferStation);
        AnnealingParams params;
        params.seed = 40 + trial;
        params.restarts = 2;
        const SolveResult sa = solve_heuristic(inst, params);
        REQUIRE(sa.plan);
        const MilpModel model = cs ? build_cs_model(inst) : build_ts_model(inst);
        const auto assignment = induced_assignment(inst, *sa.plan);
        CHECK(model.check_assignment(assignment).worst_violation <= 1e-6);
        CHECK(model.objective_value(assignment) ==
              doctest::Approx(sa.objective).epsilon(1e-9));
    }
}

TEST_CASE("literal accounting never exceeds full accounting") {
    std::mt19937_64 rng(311);
    for (int trial = 0; trial < 20; ++trial) {
        const Instance inst = test::random_instance(rng, 5, CaseKind::CurrentSituation);
        const RoutingPlan plan = construct_initial(inst, trial);
        for (const auto& route : plan.routes) {
            const RouteMetrics lit = evaluate_route(inst, route, TimeAccounting::Literal);
            const RouteMetrics full = evaluate_route(inst, route, TimeAccounting::Full);
            CHECK(lit.duration_h <= full.duration_h + 1e-12);
        }
    }
}

TEST_CASE("parameter validation") {
    std::mt19937_64 rng(309);
    const Instance inst = test::random_instance(rng, 2, CaseKind::TransferStation);
    AnnealingParams params;
    params.cooling_rate = 1.0;
    CHECK_THROWS_AS(solve_heuristic(inst, params), InvariantViolation);
    params.cooling_rate = 0.97;
    params.min_temperature_km = 0.0;
    CHECK_THROWS_AS(solve_heuristic(inst, params), InvariantViolation);
    params.min_temperature_km = 1e-3;
    params.restarts = 0;
    CHECK_THROWS_AS(solve_heuristic(inst, params), InvariantViolation);
}
