#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mrseq/annealing.hpp"
#include "mrseq/instance.hpp"
#include "mrseq/solver.hpp"

namespace mrseq {

// (value_cs - value_ts) * 100 / value_cs; positive means the transfer-station
// case improves on the current situation. Throws DivisionByZero.
double percent_diff(double value_cs, double value_ts);

struct TransferTrips {
    long trips = 0;
    double distance_km = 0.0;
};

// Trips of the larger vehicle needed to ferry one shift's waste from the
// station to the landfill, and the distance they cover.
TransferTrips transfer_trips(double shift_waste_kg, double large_capacity_kg,
                             double roundtrip_km);

// One solved shift, reduced to what cross-shift aggregation needs.
struct ShiftOutcome {
    double route_distance_km = 0.0;  // internal distances included
    int vehicles = 0;                // nonempty routes
    long trips = 0;
    double trip_distance_km = 0.0;
    bool feasible = true;

    double total_km() const { return route_distance_km + trip_distance_km; }
};

struct CaseAggregate {
    double total_distance_km = 0.0;
    int vehicles = 0;  // max across shifts; the transfer vehicle is not counted
};

// Distances of both shifts (transfer trips included) summed; vehicle count is
// the max across shifts. Throws InfeasibleInput on an infeasible shift.
CaseAggregate aggregate_shifts(const ShiftOutcome& day, const ShiftOutcome& night);

struct ShiftPair {
    Instance day;
    Instance night;

    // both shifts must share case kind, capacity and duration limit
    void validate() const;
};

enum class SolverChoice { Exact, Heuristic, Brute };

struct SweepOptions {
    SolverChoice solver = SolverChoice::Exact;
    SolveLimits limits;
    AnnealingParams params;
};

struct SweepCaseCell {
    bool ok = false;
    std::string error;
    double distance_km = 0.0;
    int vehicles = 0;
    double dist_pct_diff = 0.0;  // vs the current situation, same row
    double veh_pct_diff = 0.0;
};

struct SweepRow {
    double fraction = 1.0;
    double total_waste_kg = 0.0;
    SweepCaseCell cs;           // pct fields unused
    std::vector<SweepCaseCell> ts;  // one per transfer-station variant
};

struct ScenarioReport {
    std::vector<std::string> ts_names;
    std::vector<SweepRow> rows;
    std::vector<double> avg_dist_pct;  // per variant, over rows where defined
    std::vector<double> avg_veh_pct;
};

// Scales every case to each fraction, solves both shifts, aggregates, and
// fills the comparison columns. Rows where a case fails carry the error and
// are skipped by the averages.
ScenarioReport run_sweep(const ShiftPair& cs,
                         const std::vector<std::pair<std::string, ShiftPair>>& ts_cases,
                         const std::vector<double>& fractions, const SweepOptions& options);

std::string report_csv(const ScenarioReport& report);
std::string report_text(const ScenarioReport& report);
// fraction vs total distance / vehicles per case, for external plotting
std::string plot_distance_csv(const ScenarioReport& report);
std::string plot_vehicles_csv(const ScenarioReport& report);

}  // namespace mrseq
