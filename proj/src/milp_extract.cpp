#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "mrseq/milp.hpp"

namespace mrseq {

using nlohmann::json;

namespace {

constexpr double kIntTol = 1e-6;

struct ParsedArc {
    int from = -1;
    int to = -1;
    int vehicle = 0;  // 0 for the two-index model
};

int label_to_stop(const Instance& inst, const std::string& label) {
    if (label == "0") return inst.depot_index();
    if (label == "L") return inst.landfill_index();
    return inst.stop_index(Stop::micro(std::stoi(label)));
}

// X_<i>_<j>_<k> or Y_<i>_<j>
bool parse_arc_name(const Instance& inst, const std::string& name, ParsedArc& arc) {
    if (name.size() < 2 || (name[0] != 'X' && name[0] != 'Y') || name[1] != '_') return false;
    std::vector<std::string> parts;
    size_t start = 2;
    while (start <= name.size()) {
        size_t sep = name.find('_', start);
        if (sep == std::string::npos) {
            parts.push_back(name.substr(start));
            break;
        }
        parts.push_back(name.substr(start, sep - start));
        start = sep + 1;
    }
    const bool three_index = name[0] == 'X';
    if (parts.size() != (three_index ? 3u : 2u)) return false;
    arc.from = label_to_stop(inst, parts[0]);
    arc.to = label_to_stop(inst, parts[1]);
    arc.vehicle = three_index ? std::stoi(parts[2]) : 0;
    return true;
}

}  // namespace

std::map<std::string, double> induced_assignment(const Instance& instance,
                                                 const RoutingPlan& plan) {
    check_plan_shape(plan);
    std::map<std::string, double> values;

    auto label = [&](const Stop& s) {
        switch (s.kind) {
            case StopKind::Depot: return std::string("0");
            case StopKind::Landfill: return std::string("L");
            case StopKind::Micro: return std::to_string(s.micro_id);
        }
        return std::string("?");
    };

    if (instance.case_kind == CaseKind::CurrentSituation) {
        int k = 0;
        for (const auto& route : plan.routes) {
            if (route.size() <= 2) continue;
            ++k;
            if (k > instance.routes_cap())
                throw InvariantViolation("plan uses more routes than max_routes_K");
            double load = 0.0;
            for (size_t i = 0; i + 1 < route.size(); ++i) {
                const Stop& from = route[i];
                const Stop& to = route[i + 1];
                if (from.kind == StopKind::Micro && to.kind == StopKind::Depot)
                    throw InvariantViolation(
                        "induced_assignment: direct micro-to-depot legs have no model arc");
                if (from.kind == StopKind::Micro)
                    load += instance.waste_of(from.micro_id);
                else
                    load = 0.0;
                const std::string suffix =
                    label(from) + "_" + label(to) + "_" + std::to_string(k);
                values["X_" + suffix] = 1.0;
                if (load != 0.0) values["V_" + suffix] = load;
            }
        }
    } else {
        for (const auto& route : plan.routes) {
            if (route.size() <= 2) continue;
            double load = 0.0;
            double clock = 0.0;
            for (size_t i = 0; i + 1 < route.size(); ++i) {
                const Stop& from = route[i];
                const Stop& to = route[i + 1];
                values["Y_" + label(from) + "_" + label(to)] = 1.0;
                if (to.kind == StopKind::Micro) {
                    load += instance.waste_of(to.micro_id);
                    clock += instance.travel_h(from, to) +
                             instance.service_time_of(to.micro_id).hours;
                    values["U_" + label(to)] = load;
                    values["T_" + label(to)] = clock;
                }
            }
        }
        values["T_0"] = 0.0;
    }
    return values;
}

RoutingPlan extract_plan(const Instance& instance, const MilpModel& model,
                         const std::map<std::string, double>& assignment) {
    for (const auto& var : model.variables) {
        if (var.kind != VarKind::Binary) continue;
        auto it = assignment.find(var.name);
        const double v = it == assignment.end() ? 0.0 : it->second;
        if (std::abs(v - std::round(v)) > kIntTol)
            throw FractionalSolution(var.name + " = " + std::to_string(v));
    }

    const auto check = model.check_assignment(assignment);
    if (check.worst_violation > kIntTol)
        throw ConstraintViolation("assignment violates " + check.worst_row + " by " +
                                  std::to_string(check.worst_violation));

    // active arcs, grouped by vehicle (vehicle 0 for the two-index model)
    std::map<int, std::vector<ParsedArc>> arcs_by_vehicle;
    for (const auto& var : model.variables) {
        if (var.kind != VarKind::Binary) continue;
        auto it = assignment.find(var.name);
        if (it == assignment.end() || std::round(it->second) != 1.0) continue;
        ParsedArc arc;
        if (!parse_arc_name(instance, var.name, arc))
            throw ConstraintViolation("unrecognized arc variable " + var.name);
        arcs_by_vehicle[arc.vehicle].push_back(arc);
    }

    const int depot = instance.depot_index();
    RoutingPlan plan;

    for (auto& entry : arcs_by_vehicle) {
        std::vector<ParsedArc>& arcs = entry.second;
        // stable successor lookup: micro stops have one successor, the depot
        // and landfill may have several; pick micro targets first, ascending
        std::stable_sort(arcs.begin(), arcs.end(), [&](const ParsedArc& a, const ParsedArc& b) {
            if (a.from != b.from) return a.from < b.from;
            const bool a_depot = a.to == depot, b_depot = b.to == depot;
            if (a_depot != b_depot) return b_depot;
            return a.to < b.to;
        });
        std::vector<bool> used(arcs.size(), false);
        size_t remaining = arcs.size();

        auto take_from = [&](int node) -> int {
            for (size_t i = 0; i < arcs.size(); ++i)
                if (!used[i] && arcs[i].from == node) {
                    used[i] = true;
                    --remaining;
                    return arcs[i].to;
                }
            return -1;
        };

        while (true) {
            // unused depot departure?
            bool found = false;
            for (size_t i = 0; i < arcs.size(); ++i)
                if (!used[i] && arcs[i].from == depot) found = true;
            if (!found) break;
            Route route{Stop::depot()};
            int current = take_from(depot);
            size_t steps = 0;
            while (current != depot) {
                route.push_back(instance.stop_at(current));
                const int next = take_from(current);
                if (next < 0)
                    throw DisconnectedTour("walk stops at " +
                                           to_string(instance.stop_at(current)));
                current = next;
                if (++steps > arcs.size() + 1)
                    throw DisconnectedTour("walk does not return to the depot");
            }
            route.push_back(Stop::depot());
            plan.routes.push_back(std::move(route));
        }
        if (remaining > 0)
            throw DisconnectedTour(std::to_string(remaining) +
                                   " active arcs are not reachable from the depot");
    }

    return plan;
}

std::map<std::string, double> load_assignment(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("assignment is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("assignment must be a JSON object");
    std::map<std::string, double> values;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_number())
            throw SchemaError("assignment values must be numbers");
        values[it.key()] = it.value().get<double>();
    }
    return values;
}

}  // namespace mrseq
