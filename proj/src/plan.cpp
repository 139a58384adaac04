#include "mrseq/plan.hpp"

#include <sstream>

#include "json.hpp"

namespace mrseq {

using nlohmann::json;

std::string sequence_string(const Route& route) {
    std::ostringstream out;
    for (size_t i = 0; i < route.size(); ++i) {
        if (i) out << "-";
        switch (route[i].kind) {
            case StopKind::Depot: out << "D"; break;
            case StopKind::Landfill: out << "L"; break;
            case StopKind::Micro: out << route[i].micro_id; break;
        }
    }
    return out.str();
}

RoutingPlan load_plan(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("plan is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("routes") || !j["routes"].is_array())
        throw SchemaError("plan must be an object with a 'routes' array");
    RoutingPlan plan;
    for (const auto& rj : j["routes"]) {
        if (!rj.is_array()) throw SchemaError("each route must be an array of stops");
        Route route;
        for (const auto& sj : rj) {
            if (sj.is_string()) {
                const std::string s = sj.get<std::string>();
                if (s == "depot") route.push_back(Stop::depot());
                else if (s == "landfill") route.push_back(Stop::landfill());
                else throw SchemaError("unknown stop '" + s + "'");
            } else if (sj.is_number_integer()) {
                route.push_back(Stop::micro(sj.get<int>()));
            } else {
                throw SchemaError("stops must be \"depot\", \"landfill\" or micro ids");
            }
        }
        plan.routes.push_back(std::move(route));
    }
    check_plan_shape(plan);
    return plan;
}

std::string save_plan(const RoutingPlan& plan) {
    json j;
    j["routes"] = json::array();
    for (const auto& route : plan.routes) {
        json rj = json::array();
        for (const auto& s : route) {
            switch (s.kind) {
                case StopKind::Depot: rj.push_back("depot"); break;
                case StopKind::Landfill: rj.push_back("landfill"); break;
                case StopKind::Micro: rj.push_back(s.micro_id); break;
            }
        }
        j["routes"].push_back(rj);
    }
    return j.dump(2) + "\n";
}

void check_plan_shape(const RoutingPlan& plan) {
    for (const auto& route : plan.routes) {
        if (route.size() < 2)
            throw SchemaError("a route needs at least its two depot endpoints");
        if (route.front().kind != StopKind::Depot || route.back().kind != StopKind::Depot)
            throw SchemaError("routes must start and end at the depot");
        for (size_t i = 1; i + 1 < route.size(); ++i)
            if (route[i].kind == StopKind::Depot)
                throw SchemaError("depot may not appear in the interior of a route");
    }
}

}  // namespace mrseq
