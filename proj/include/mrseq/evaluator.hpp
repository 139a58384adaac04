#pragma once

#include <string>
#include <vector>

#include "mrseq/instance.hpp"
#include "mrseq/plan.hpp"

namespace mrseq {

// How route duration is charged. Full counts travel on every leg plus the
// collection time of every visited micro-route. Literal counts only
// micro-to-micro legs and the collection time of the leg's target, the form
// the current-situation model's time limit row uses; it exists for model
// cross-checks.
enum class TimeAccounting { Full, Literal };

enum class ViolationKind {
    Capacity,
    TimeLimit,
    MissingLandfillBeforeDepot,
    IllegalLandfill,
};

struct Violation {
    ViolationKind kind;
    std::string detail;
};

std::string to_string(ViolationKind kind);

struct Leg {
    Stop from;
    Stop to;
    double load_kg = 0.0;      // carried on this leg
    double distance_km = 0.0;  // arc distance
};

struct RouteMetrics {
    double distance_km = 0.0;      // arcs + visited internal distances
    double arc_distance_km = 0.0;  // arcs only, the model objective's share
    double duration_h = 0.0;
    std::vector<Leg> legs;
    double waste_collected_kg = 0.0;
    bool feasible = true;
    std::vector<Violation> violations;
};

struct PlanMetrics {
    double total_distance_km = 0.0;
    double total_arc_distance_km = 0.0;
    double total_duration_h = 0.0;
    double total_waste_kg = 0.0;
    int vehicles_used = 0;  // nonempty routes
    std::vector<RouteMetrics> per_route;
    bool feasible = true;
};

// Walks one route, tracking load (reset at depot and landfill, charged when
// leaving each micro-route) and collecting every breach. Throws UnknownStop
// for stops the instance does not define.
RouteMetrics evaluate_route(const Instance& instance, const Route& route,
                            TimeAccounting accounting = TimeAccounting::Full);

// Totals over all routes plus the coverage check: every micro-route exactly
// once. Throws DuplicateMicroRoute / MissingMicroRoute.
PlanMetrics evaluate_plan(const Instance& instance, const RoutingPlan& plan,
                          TimeAccounting accounting = TimeAccounting::Full);

// Table-style report, one line per route: sequence, distance, time, waste.
std::string metrics_table(const Instance& instance, const RoutingPlan& plan,
                          const PlanMetrics& metrics);
std::string metrics_json(const RoutingPlan& plan, const PlanMetrics& metrics);

}  // namespace mrseq
