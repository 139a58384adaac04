#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrseq/errors.hpp"

namespace mrseq {

enum class CaseKind { CurrentSituation, TransferStation };

std::string to_string(CaseKind kind);
CaseKind case_kind_from_string(const std::string& s);

// One fixed collection zone. The internal path is predetermined; only the
// visiting order of micro-routes is decided.
struct MicroRoute {
    int id = 0;
    double internal_distance_km = 0.0;   // > 0
    double base_waste_kg = 0.0;          // >= 0
    std::optional<double> area_km2;      // informational
    // Company-recorded collection time for the waste level the instance was
    // built with. Cleared when the waste is rescaled.
    std::optional<double> service_time_override_h;
};

enum class StopKind { Depot, Landfill, Micro };

// A stop in a route: the depot, the landfill, or a micro-route by id.
struct Stop {
    StopKind kind = StopKind::Depot;
    int micro_id = -1;  // meaningful for Micro only

    static Stop depot() { return {StopKind::Depot, -1}; }
    static Stop landfill() { return {StopKind::Landfill, -1}; }
    static Stop micro(int id) { return {StopKind::Micro, id}; }

    bool operator==(const Stop& other) const = default;
};

std::string to_string(const Stop& s);

// Speed regression on waste density: speed = intercept - slope * (waste/km),
// clamped below at min_speed_floor.
struct ServiceTimeModel {
    double intercept_kmh = 35.0;
    double slope = 0.0979;           // (km/h) per (kg/km)
    double min_speed_floor_kmh = 1.0;
};

struct ServiceTime {
    double hours = 0.0;
    bool clamped = false;  // speed hit the floor
};

ServiceTime service_time(const ServiceTimeModel& model, double internal_distance_km,
                         double waste_kg);

struct Scenario {
    double waste_fraction = 1.0;  // > 0
};

// Transfer-station side data: the larger vehicle ferrying accumulated waste
// to the landfill.
struct TransferInfo {
    double large_capacity_kg = 0.0;
    double roundtrip_to_landfill_km = 0.0;
};

// One shift's routing problem: micro-routes, inter-stop matrices, vehicle
// capacity and shift duration limit. Immutable after construction; safe to
// share across threads.
class Instance {
public:
    CaseKind case_kind = CaseKind::CurrentSituation;
    std::vector<MicroRoute> micro_routes;
    // Matrices indexed by stop position: 0 = depot, then (CurrentSituation
    // only) the landfill, then micro-routes in declared order.
    std::vector<std::vector<double>> d_km;
    std::vector<std::vector<double>> h_h;
    double capacity_kg = 0.0;       // Q
    double time_limit_h = 0.0;      // T
    std::optional<int> max_routes;  // K, CurrentSituation only; defaults to |M|
    std::optional<TransferInfo> transfer;
    ServiceTimeModel st_model;
    double waste_fraction_applied = 1.0;

    // Validates all invariants; throws InvariantViolation / InfeasibleDemand.
    void validate() const;

    int micro_count() const { return static_cast<int>(micro_routes.size()); }
    int stop_count() const { return static_cast<int>(d_km.size()); }
    bool has_landfill() const { return case_kind == CaseKind::CurrentSituation; }

    int depot_index() const { return 0; }
    int landfill_index() const;               // throws WrongCaseKind on TS
    int stop_index(const Stop& s) const;      // throws UnknownStop
    Stop stop_at(int index) const;
    int micro_pos(int micro_id) const;        // position in micro_routes; throws UnknownStop

    int routes_cap() const;  // K if set, else |M|

    double distance(const Stop& from, const Stop& to) const;
    double travel_h(const Stop& from, const Stop& to) const;

    // Effective waste for micro_routes[pos], after scenario scaling.
    double waste_kg(int pos) const {
        return micro_routes[pos].base_waste_kg * waste_fraction_applied;
    }
    double waste_of(int micro_id) const { return waste_kg(micro_pos(micro_id)); }
    double total_waste_kg() const;

    // Effective collection time: override if present, else the regression at
    // the current waste level.
    ServiceTime service_time_at(int pos) const;
    ServiceTime service_time_of(int micro_id) const { return service_time_at(micro_pos(micro_id)); }
    double total_internal_distance_km() const;
};

// Returns a copy with every micro-route's effective waste multiplied by
// scenario.waste_fraction and collection times re-derived from the
// regression. fraction == 1.0 is the identity. Throws InfeasibleDemand when
// a scaled micro-route exceeds capacity.
Instance scale_scenario(const Instance& instance, const Scenario& scenario);

// JSON instance files.
Instance load_instance(const std::string& text);
Instance load_instance_file(const std::string& path);
std::string save_instance(const Instance& instance);

}  // namespace mrseq
