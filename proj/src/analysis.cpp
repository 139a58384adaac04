#include <cmath>
#include <cstdio>
#include <sstream>

#include "mrseq/analysis.hpp"
#include "mrseq/evaluator.hpp"

namespace mrseq {

double percent_diff(double value_cs, double value_ts) {
    if (value_cs == 0.0) throw DivisionByZero("percent_diff with a zero base value");
    return (value_cs - value_ts) * 100.0 / value_cs;
}

TransferTrips transfer_trips(double shift_waste_kg, double large_capacity_kg,
                             double roundtrip_km) {
    if (large_capacity_kg <= 0.0)
        throw InvariantViolation("transfer vehicle capacity must be > 0");
    if (shift_waste_kg < 0.0) throw InvariantViolation("shift waste must be >= 0");
    TransferTrips result;
    result.trips = static_cast<long>(std::ceil(shift_waste_kg / large_capacity_kg));
    result.distance_km = static_cast<double>(result.trips) * roundtrip_km;
    return result;
}

CaseAggregate aggregate_shifts(const ShiftOutcome& day, const ShiftOutcome& night) {
    if (!day.feasible || !night.feasible)
        throw InfeasibleInput("aggregate_shifts needs feasible shift results");
    CaseAggregate agg;
    agg.total_distance_km = day.total_km() + night.total_km();
    agg.vehicles = std::max(day.vehicles, night.vehicles);
    return agg;
}

void ShiftPair::validate() const {
    day.validate();
    night.validate();
    if (day.case_kind != night.case_kind)
        throw InvariantViolation("shift pair mixes case kinds");
    if (day.capacity_kg != night.capacity_kg)
        throw InvariantViolation("shift pair mixes vehicle capacities");
    if (day.time_limit_h != night.time_limit_h)
        throw InvariantViolation("shift pair mixes shift duration limits");
}

namespace {

SolveResult dispatch_solver(const Instance& instance, const SweepOptions& options) {
    switch (options.solver) {
        case SolverChoice::Brute: return solve_brute_force(instance);
        case SolverChoice::Heuristic: return solve_heuristic(instance, options.params);
        case SolverChoice::Exact: return solve_exact(instance, options.limits);
    }
    throw std::logic_error("unknown solver choice");
}

// Solve one scaled shift and reduce it for aggregation.
ShiftOutcome solve_shift(const Instance& shift, const SweepOptions& options) {
    const SolveResult solved = dispatch_solver(shift, options);
    if (!solved.plan)
        throw InfeasibleInput("no feasible plan (" + to_string(solved.status) + ")");
    const PlanMetrics metrics = evaluate_plan(shift, *solved.plan);
    if (!metrics.feasible) throw InfeasibleInput("solver returned an infeasible plan");

    ShiftOutcome outcome;
    outcome.route_distance_km = metrics.total_distance_km;
    outcome.vehicles = metrics.vehicles_used;
    if (shift.case_kind == CaseKind::TransferStation) {
        if (!shift.transfer)
            throw InvariantViolation(
                "transfer-station instance lacks the transfer record needed for trips");
        const TransferTrips trips =
            transfer_trips(shift.total_waste_kg(), shift.transfer->large_capacity_kg,
                           shift.transfer->roundtrip_to_landfill_km);
        outcome.trips = trips.trips;
        outcome.trip_distance_km = trips.distance_km;
    }
    return outcome;
}

SweepCaseCell solve_case(const ShiftPair& pair, double fraction,
                         const SweepOptions& options) {
    SweepCaseCell cell;
    try {
        const Scenario scenario{fraction};
        const Instance day = scale_scenario(pair.day, scenario);
        const Instance night = scale_scenario(pair.night, scenario);
        const CaseAggregate agg =
            aggregate_shifts(solve_shift(day, options), solve_shift(night, options));
        cell.ok = true;
        cell.distance_km = agg.total_distance_km;
        cell.vehicles = agg.vehicles;
    } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
    }
    return cell;
}

}  // namespace

ScenarioReport run_sweep(const ShiftPair& cs,
                         const std::vector<std::pair<std::string, ShiftPair>>& ts_cases,
                         const std::vector<double>& fractions, const SweepOptions& options) {
    cs.validate();
    if (cs.day.case_kind != CaseKind::CurrentSituation)
        throw InvariantViolation("the baseline pair must be a current-situation case");
    for (const auto& [name, pair] : ts_cases) {
        pair.validate();
        if (pair.day.case_kind != CaseKind::TransferStation)
            throw InvariantViolation("comparison case '" + name +
                                     "' must be a transfer-station case");
    }

    ScenarioReport report;
    for (const auto& [name, pair] : ts_cases) report.ts_names.push_back(name);

    const double city_base_waste = cs.day.total_waste_kg() + cs.night.total_waste_kg();

    for (double fraction : fractions) {
        SweepRow row;
        row.fraction = fraction;
        row.total_waste_kg = fraction * city_base_waste;
        row.cs = solve_case(cs, fraction, options);
        for (const auto& [name, pair] : ts_cases) {
            SweepCaseCell cell = solve_case(pair, fraction, options);
            if (cell.ok && row.cs.ok) {
                cell.dist_pct_diff = percent_diff(row.cs.distance_km, cell.distance_km);
                cell.veh_pct_diff = percent_diff(static_cast<double>(row.cs.vehicles),
                                                 static_cast<double>(cell.vehicles));
            }
            row.ts.push_back(std::move(cell));
        }
        report.rows.push_back(std::move(row));
    }

    for (size_t t = 0; t < report.ts_names.size(); ++t) {
        double dist_sum = 0.0, veh_sum = 0.0;
        int count = 0;
        for (const auto& row : report.rows) {
            if (!row.cs.ok || !row.ts[t].ok) continue;
            dist_sum += row.ts[t].dist_pct_diff;
            veh_sum += row.ts[t].veh_pct_diff;
            ++count;
        }
        report.avg_dist_pct.push_back(count ? dist_sum / count : 0.0);
        report.avg_veh_pct.push_back(count ? veh_sum / count : 0.0);
    }
    return report;
}

namespace {

std::string fmt(double v, int decimals = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::string report_csv(const ScenarioReport& report) {
    std::ostringstream out;
    out << "fraction,total_waste_kg,cs_distance_km,cs_vehicles";
    for (const auto& name : report.ts_names)
        out << "," << name << "_distance_km," << name << "_dist_pct_diff," << name
            << "_vehicles," << name << "_veh_pct_diff";
    out << "\n";
    for (const auto& row : report.rows) {
        out << fmt(row.fraction) << "," << fmt(row.total_waste_kg);
        if (row.cs.ok)
            out << "," << fmt(row.cs.distance_km) << "," << row.cs.vehicles;
        else
            out << ",error,error";
        for (const auto& cell : row.ts) {
            if (cell.ok && row.cs.ok)
                out << "," << fmt(cell.distance_km) << "," << fmt(cell.dist_pct_diff) << ","
                    << cell.vehicles << "," << fmt(cell.veh_pct_diff);
            else if (cell.ok)
                out << "," << fmt(cell.distance_km) << ",," << cell.vehicles << ",";
            else
                out << ",error,,error,";
        }
        out << "\n";
    }
    out << "average,,,";
    for (size_t t = 0; t < report.ts_names.size(); ++t)
        out << ",," << fmt(report.avg_dist_pct[t]) << ",," << fmt(report.avg_veh_pct[t]);
    out << "\n";
    return out.str();
}

std::string report_text(const ScenarioReport& report) {
    std::ostringstream out;
    char line[512];
    std::snprintf(line, sizeof(line), "%9s  %16s  %14s  %8s", "scenario", "total_waste_kg",
                  "cs_distance_km", "cs_veh");
    out << line;
    for (const auto& name : report.ts_names) {
        std::snprintf(line, sizeof(line), "  %14s  %10s  %8s  %10s",
                      (name + "_km").c_str(), (name + "_d%").c_str(),
                      (name + "_veh").c_str(), (name + "_v%").c_str());
        out << line;
    }
    out << "\n";
    for (const auto& row : report.rows) {
        std::snprintf(line, sizeof(line), "%8.0f%%  %16s  %14s  %8s",
                      row.fraction * 100.0, fmt(row.total_waste_kg).c_str(),
                      row.cs.ok ? fmt(row.cs.distance_km).c_str() : "error",
                      row.cs.ok ? std::to_string(row.cs.vehicles).c_str() : "-");
        out << line;
        for (const auto& cell : row.ts) {
            if (cell.ok && row.cs.ok)
                std::snprintf(line, sizeof(line), "  %14s  %9s%%  %8d  %9s%%",
                              fmt(cell.distance_km).c_str(), fmt(cell.dist_pct_diff).c_str(),
                              cell.vehicles, fmt(cell.veh_pct_diff).c_str());
            else
                std::snprintf(line, sizeof(line), "  %14s  %10s  %8s  %10s",
                              cell.ok ? fmt(cell.distance_km).c_str() : "error", "-",
                              cell.ok ? std::to_string(cell.vehicles).c_str() : "-", "-");
            out << line;
        }
        out << "\n";
    }
    std::snprintf(line, sizeof(line), "%9s  %16s  %14s  %8s", "average", "", "", "");
    out << line;
    for (size_t t = 0; t < report.ts_names.size(); ++t) {
        std::snprintf(line, sizeof(line), "  %14s  %9s%%  %8s  %9s%%", "",
                      fmt(report.avg_dist_pct[t]).c_str(), "",
                      fmt(report.avg_veh_pct[t]).c_str());
        out << line;
    }
    out << "\n";
    return out.str();
}

std::string plot_distance_csv(const ScenarioReport& report) {
    std::ostringstream out;
    out << "fraction,cs";
    for (const auto& name : report.ts_names) out << "," << name;
    out << "\n";
    for (const auto& row : report.rows) {
        out << fmt(row.fraction);
        out << "," << (row.cs.ok ? fmt(row.cs.distance_km) : "");
        for (const auto& cell : row.ts) out << "," << (cell.ok ? fmt(cell.distance_km) : "");
        out << "\n";
    }
    return out.str();
}

std::string plot_vehicles_csv(const ScenarioReport& report) {
    std::ostringstream out;
    out << "fraction,cs";
    for (const auto& name : report.ts_names) out << "," << name;
    out << "\n";
    for (const auto& row : report.rows) {
        out << fmt(row.fraction);
        out << "," << (row.cs.ok ? std::to_string(row.cs.vehicles) : "");
        for (const auto& cell : row.ts)
            out << "," << (cell.ok ? std::to_string(cell.vehicles) : "");
        out << "\n";
    }
    return out.str();
}

}  // namespace mrseq
