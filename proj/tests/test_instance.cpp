#include <cstring>
#include <random>

#include "doctest.h"
#include "mrseq/instance.hpp"
#include "test_support.hpp"

using namespace mrseq;

namespace {

// Micro-route 22 of the day shift: 38.11 km internal path, 9,524 kg at the
// normal waste level.
constexpr double kDist22 = 38.11;
constexpr double kWaste22 = 9524.0;

Instance tiny_cs_instance() {
    test::CityBuilder b;
    b.kind = CaseKind::CurrentSituation;
    b.points = {{0.0, 0.0}, {10.0, 0.0}, {3.0, 4.0}, {6.0, 2.0}};
    b.internal_km = {38.11, 47.09};
    b.waste_kg = {9524.0, 11811.0};
    return b.build();
}

}  // namespace

TEST_CASE("speed regression reproduces the recorded micro-route 22 row") {
    const ServiceTimeModel model;
    const double fractions[] = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.05, 1.1};
    const double expected_speed[] = {22.77, 20.32, 17.88, 15.43, 12.99, 10.54, 9.32, 8.09};
    const double expected_time[] = {1.67, 1.88, 2.13, 2.47, 2.93, 3.62, 4.09, 4.71};
    for (int c = 0; c < 8; ++c) {
        const double waste = kWaste22 * fractions[c];
        const ServiceTime st = service_time(model, kDist22, waste);
        CHECK(!st.clamped);
        CHECK(std::abs(kDist22 / st.hours - expected_speed[c]) < 0.01);
        CHECK(std::abs(st.hours - expected_time[c]) < 0.01);
    }
}

TEST_CASE("zero waste runs at the intercept speed") {
    const ServiceTime st = service_time(ServiceTimeModel{}, kDist22, 0.0);
    CHECK(st.hours == doctest::Approx(38.11 / 35.0).epsilon(1e-12));
    CHECK(!st.clamped);
}

TEST_CASE("service time clamps at the speed floor") {
    // density beyond 357.5 kg/km sends the regression nonpositive
    const ServiceTime st = service_time(ServiceTimeModel{}, 10.0, 4000.0);
    CHECK(st.clamped);
    CHECK(st.hours == doctest::Approx(10.0 / 1.0));
}

TEST_CASE("service time is strictly increasing in waste below the floor") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(5.0, 100.0);
    std::uniform_real_distribution<double> waste(0.0, 2000.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double km = dist(rng);
        const double w1 = waste(rng), w2 = waste(rng);
        const ServiceTime t1 = service_time(ServiceTimeModel{}, km, std::min(w1, w2));
        const ServiceTime t2 = service_time(ServiceTimeModel{}, km, std::max(w1, w2));
        if (!t1.clamped && !t2.clamped && w1 != w2) CHECK(t1.hours < t2.hours);
    }
}

TEST_CASE("scenario scaling hits the recorded 50% and 110% waste levels") {
    Instance inst = tiny_cs_instance();
    const Instance half = scale_scenario(inst, {0.5});
    CHECK(half.waste_kg(0) == doctest::Approx(4762.00).epsilon(1e-12));
    const Instance overload = scale_scenario(inst, {1.1});
    CHECK(overload.waste_kg(0) == doctest::Approx(10476.40).epsilon(1e-12));
    // identity keeps the instance bit-for-bit
    const Instance same = scale_scenario(inst, {1.0});
    CHECK(save_instance(same) == save_instance(inst));
}

TEST_CASE("scaling composes multiplicatively on waste") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> frac(0.2, 1.2);
    Instance inst = tiny_cs_instance();
    for (int trial = 0; trial < 100; ++trial) {
        const double f = frac(rng), g = frac(rng);
        if (f * g > 1.3) continue;  // keep demand under capacity
        const Instance two_step = scale_scenario(scale_scenario(inst, {f}), {g});
        const Instance one_step = scale_scenario(inst, {f * g});
        for (int m = 0; m < inst.micro_count(); ++m)
            CHECK(two_step.waste_kg(m) ==
                  doctest::Approx(one_step.waste_kg(m)).epsilon(1e-9));
    }
}

TEST_CASE("scaling past capacity is rejected") {
    Instance inst = tiny_cs_instance();
    CHECK_THROWS_AS(scale_scenario(inst, {2.0}), InfeasibleDemand);
    CHECK_THROWS_AS(scale_scenario(inst, {0.0}), InvariantViolation);
}

TEST_CASE("scaling recomputes service times from the regression") {
    Instance inst = tiny_cs_instance();
    inst.micro_routes[0].service_time_override_h = 3.9;  // company record
    CHECK(inst.service_time_at(0).hours == 3.9);
    const Instance scaled = scale_scenario(inst, {0.5});
    CHECK(scaled.service_time_at(0).hours ==
          doctest::Approx(service_time(inst.st_model, kDist22, 4762.0).hours));
}

TEST_CASE("minimal current-situation file loads with four stops") {
    const Instance inst = tiny_cs_instance();
    CHECK(inst.stop_count() == 4);
    CHECK(inst.micro_count() == 2);
    CHECK(inst.stop_index(Stop::landfill()) == 1);
    CHECK(inst.stop_index(Stop::micro(2)) == 3);
}

TEST_CASE("instance save/load round-trips bit-exactly") {
    test::CityBuilder b;
    b.kind = CaseKind::CurrentSituation;
    b.points = {{0.0, 0.0}, {10.0, 0.0}, {3.0, 4.0}};
    b.internal_km = {38.11};
    b.waste_kg = {9524.0};
    b.first_id = 22;
    Instance inst = b.build();
    inst.micro_routes[0].area_km2 = 3.20;

    const std::string text = save_instance(inst);
    const Instance loaded = load_instance(text);
    CHECK(save_instance(loaded) == text);
    CHECK(loaded.micro_routes[0].id == 22);
    CHECK(loaded.micro_routes[0].internal_distance_km == 38.11);
    CHECK(loaded.micro_routes[0].base_waste_kg == 9524.0);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Instance r = test::random_instance(
            rng, 1 + static_cast<int>(rng() % 6),
            rng() % 2 ? CaseKind::CurrentSituation : CaseKind::TransferStation);
        CHECK(save_instance(load_instance(save_instance(r))) == save_instance(r));
    }
}

TEST_CASE("loader rejects malformed and invariant-breaking files") {
    const Instance good = tiny_cs_instance();
    const std::string text = save_instance(good);

    CHECK_THROWS_AS(load_instance("{not json"), SchemaError);
    CHECK_THROWS_AS(load_instance("{}"), SchemaError);

    SUBCASE("missing landfill row in a current-situation file") {
        std::string broken = text;
        const auto at = broken.find("\"landfill\",");
        broken.erase(at, std::strlen("\"landfill\","));
        CHECK_THROWS_AS(load_instance(broken), InvariantViolation);
    }
    SUBCASE("negative distance") {
        Instance bad = good;
        bad.d_km[0][1] = -1.0;
        CHECK_THROWS_AS(load_instance(save_instance(bad)), InvariantViolation);
    }
    SUBCASE("demand over capacity") {
        Instance bad = good;
        bad.micro_routes[0].base_waste_kg = bad.capacity_kg * 1.5;
        CHECK_THROWS_AS(load_instance(save_instance(bad)), InfeasibleDemand);
    }
    SUBCASE("non-positive micro-route id") {
        Instance bad = good;
        bad.micro_routes[0].id = 0;
        CHECK_THROWS_AS(bad.validate(), InvariantViolation);
    }
    SUBCASE("transfer record on a current-situation instance") {
        Instance bad = good;
        bad.transfer = TransferInfo{25000.0, 25.31};
        CHECK_THROWS(bad.validate());
    }
    SUBCASE("landfill stop on a transfer-station instance") {
        std::string broken = text;
        const auto at = broken.find("current_situation");
        broken.replace(at, std::strlen("current_situation"), "transfer_station");
        CHECK_THROWS_AS(load_instance(broken), InvariantViolation);
    }
}

TEST_CASE("landfill is only addressable in the current-situation case") {
    test::CityBuilder b;
    b.kind = CaseKind::TransferStation;
    b.points = {{0.0, 0.0}, {3.0, 4.0}};
    b.internal_km = {38.11};
    b.waste_kg = {9524.0};
    b.transfer = TransferInfo{25000.0, 25.31};
    const Instance inst = b.build();
    CHECK_THROWS_AS(inst.stop_index(Stop::landfill()), WrongCaseKind);
}
