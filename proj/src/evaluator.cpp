#include "mrseq/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

namespace mrseq {

using nlohmann::json;

namespace {
constexpr double kTol = 1e-9;
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Capacity: return "Capacity";
        case ViolationKind::TimeLimit: return "TimeLimit";
        case ViolationKind::MissingLandfillBeforeDepot: return "MissingLandfillBeforeDepot";
        case ViolationKind::IllegalLandfill: return "IllegalLandfill";
    }
    return "?";
}

RouteMetrics evaluate_route(const Instance& instance, const Route& route,
                            TimeAccounting accounting) {
    if (route.size() < 2 || route.front().kind != StopKind::Depot ||
        route.back().kind != StopKind::Depot)
        throw SchemaError("evaluate_route: route must start and end at the depot");

    RouteMetrics m;

    // A landfill stop in a transfer-station route is a breach, not an
    // addressable stop; metrics are computed over the remaining sequence.
    Route seq;
    for (const auto& s : route) {
        if (s.kind == StopKind::Landfill && !instance.has_landfill()) {
            m.violations.push_back({ViolationKind::IllegalLandfill,
                                    "transfer-station routes may not visit the landfill"});
            continue;
        }
        if (s.kind == StopKind::Micro) instance.micro_pos(s.micro_id);  // throws UnknownStop
        seq.push_back(s);
    }

    double load = 0.0;
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
        const Stop& from = seq[i];
        const Stop& to = seq[i + 1];
        if (from.kind == StopKind::Micro) {
            const int pos = instance.micro_pos(from.micro_id);
            load += instance.waste_kg(pos);
            m.waste_collected_kg += instance.waste_kg(pos);
            m.distance_km += instance.micro_routes[pos].internal_distance_km;
            if (accounting == TimeAccounting::Full)
                m.duration_h += instance.service_time_at(pos).hours;
        } else {
            load = 0.0;
        }
        const double d = instance.distance(from, to);
        m.arc_distance_km += d;
        m.distance_km += d;
        if (accounting == TimeAccounting::Full) {
            m.duration_h += instance.travel_h(from, to);
        } else if (from.kind == StopKind::Micro && to.kind == StopKind::Micro) {
            m.duration_h += instance.travel_h(from, to) +
                            instance.service_time_of(to.micro_id).hours;
        }
        m.legs.push_back({from, to, load, d});
        if (load > instance.capacity_kg + kTol)
            m.violations.push_back(
                {ViolationKind::Capacity,
                 "leg " + to_string(from) + "->" + to_string(to) + " carries " +
                     std::to_string(load) + " kg over capacity"});
    }

    if (m.duration_h > instance.time_limit_h + kTol)
        m.violations.push_back({ViolationKind::TimeLimit,
                                "route takes " + std::to_string(m.duration_h) +
                                    " h, limit is " + std::to_string(instance.time_limit_h)});

    if (instance.has_landfill() && seq.size() > 2 &&
        seq[seq.size() - 2].kind != StopKind::Landfill)
        m.violations.push_back({ViolationKind::MissingLandfillBeforeDepot,
                                "route must unload at the landfill before returning"});

    m.feasible = m.violations.empty();
    return m;
}

PlanMetrics evaluate_plan(const Instance& instance, const RoutingPlan& plan,
                          TimeAccounting accounting) {
    check_plan_shape(plan);

    std::map<int, int> seen;
    for (const auto& route : plan.routes)
        for (const auto& s : route)
            if (s.kind == StopKind::Micro) {
                instance.micro_pos(s.micro_id);  // throws UnknownStop
                if (++seen[s.micro_id] > 1)
                    throw DuplicateMicroRoute("micro-route " + std::to_string(s.micro_id) +
                                              " appears more than once");
            }
    for (const auto& mr : instance.micro_routes)
        if (!seen.count(mr.id))
            throw MissingMicroRoute("micro-route " + std::to_string(mr.id) +
                                    " is not covered by the plan");

    PlanMetrics total;
    for (const auto& route : plan.routes) {
        RouteMetrics m = evaluate_route(instance, route, accounting);
        total.total_distance_km += m.distance_km;
        total.total_arc_distance_km += m.arc_distance_km;
        total.total_duration_h += m.duration_h;
        total.total_waste_kg += m.waste_collected_kg;
        if (route.size() > 2) ++total.vehicles_used;
        if (!m.feasible) total.feasible = false;
        total.per_route.push_back(std::move(m));
    }
    return total;
}

namespace {
std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}
}  // namespace

std::string metrics_table(const Instance& instance, const RoutingPlan& plan,
                          const PlanMetrics& metrics) {
    (void)instance;
    std::ostringstream out;
    size_t seq_width = 8;
    for (const auto& route : plan.routes)
        seq_width = std::max(seq_width, sequence_string(route).size());

    char line[256];
    std::snprintf(line, sizeof(line), "%5s  %-*s  %12s  %8s  %12s\n", "route",
                  static_cast<int>(seq_width), "sequence", "distance_km", "time_h",
                  "waste_kg");
    out << line;
    for (size_t r = 0; r < plan.routes.size(); ++r) {
        const auto& m = metrics.per_route[r];
        std::snprintf(line, sizeof(line), "%5zu  %-*s  %12s  %8s  %12s%s\n", r + 1,
                      static_cast<int>(seq_width), sequence_string(plan.routes[r]).c_str(),
                      fmt2(m.distance_km).c_str(), fmt2(m.duration_h).c_str(),
                      fmt2(m.waste_collected_kg).c_str(),
                      m.feasible ? "" : "  INFEASIBLE");
        out << line;
    }
    std::snprintf(line, sizeof(line), "%5s  %-*s  %12s  %8s  %12s\n", "total",
                  static_cast<int>(seq_width), "", fmt2(metrics.total_distance_km).c_str(),
                  fmt2(metrics.total_duration_h).c_str(),
                  fmt2(metrics.total_waste_kg).c_str());
    out << line;
    return out.str();
}

std::string metrics_json(const RoutingPlan& plan, const PlanMetrics& metrics) {
    json j;
    j["total_distance_km"] = metrics.total_distance_km;
    j["total_arc_distance_km"] = metrics.total_arc_distance_km;
    j["total_duration_h"] = metrics.total_duration_h;
    j["total_waste_kg"] = metrics.total_waste_kg;
    j["vehicles_used"] = metrics.vehicles_used;
    j["feasible"] = metrics.feasible;
    j["routes"] = json::array();
    for (size_t r = 0; r < metrics.per_route.size(); ++r) {
        const auto& m = metrics.per_route[r];
        json rj;
        rj["sequence"] = sequence_string(plan.routes[r]);
        rj["distance_km"] = m.distance_km;
        rj["arc_distance_km"] = m.arc_distance_km;
        rj["duration_h"] = m.duration_h;
        rj["waste_kg"] = m.waste_collected_kg;
        rj["feasible"] = m.feasible;
        json vj = json::array();
        for (const auto& v : m.violations) vj.push_back(to_string(v.kind));
        rj["violations"] = vj;
        j["routes"].push_back(rj);
    }
    return j.dump(2) + "\n";
}

}  // namespace mrseq
