#include "mrseq/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mrseq {

using nlohmann::json;

std::string to_string(CaseKind kind) {
    return kind == CaseKind::CurrentSituation ? "current_situation" : "transfer_station";
}

CaseKind case_kind_from_string(const std::string& s) {
    if (s == "current_situation") return CaseKind::CurrentSituation;
    if (s == "transfer_station") return CaseKind::TransferStation;
    throw SchemaError("unknown case_kind: '" + s + "'");
}

std::string to_string(const Stop& s) {
    switch (s.kind) {
        case StopKind::Depot: return "depot";
        case StopKind::Landfill: return "landfill";
        case StopKind::Micro: return std::to_string(s.micro_id);
    }
    return "?";
}

ServiceTime service_time(const ServiceTimeModel& model, double internal_distance_km,
                         double waste_kg) {
    if (internal_distance_km <= 0.0)
        throw InvariantViolation("service_time: internal distance must be > 0");
    if (waste_kg < 0.0)
        throw InvariantViolation("service_time: waste must be >= 0");
    const double density = waste_kg / internal_distance_km;  // kg/km
    double speed = model.intercept_kmh - model.slope * density;
    bool clamped = false;
    if (speed < model.min_speed_floor_kmh) {
        speed = model.min_speed_floor_kmh;
        clamped = true;
    }
    return {internal_distance_km / speed, clamped};
}

int Instance::landfill_index() const {
    if (case_kind != CaseKind::CurrentSituation)
        throw WrongCaseKind("landfill is only addressable in the current-situation case");
    return 1;
}

int Instance::stop_index(const Stop& s) const {
    switch (s.kind) {
        case StopKind::Depot:
            return 0;
        case StopKind::Landfill:
            return landfill_index();
        case StopKind::Micro: {
            const int base = has_landfill() ? 2 : 1;
            return base + micro_pos(s.micro_id);
        }
    }
    throw UnknownStop("bad stop kind");
}

Stop Instance::stop_at(int index) const {
    if (index < 0 || index >= stop_count()) throw UnknownStop("stop index out of range");
    if (index == 0) return Stop::depot();
    const int base = has_landfill() ? 2 : 1;
    if (has_landfill() && index == 1) return Stop::landfill();
    return Stop::micro(micro_routes[index - base].id);
}

int Instance::micro_pos(int micro_id) const {
    for (int i = 0; i < micro_count(); ++i)
        if (micro_routes[i].id == micro_id) return i;
    throw UnknownStop("unknown micro-route id " + std::to_string(micro_id));
}

int Instance::routes_cap() const {
    return max_routes ? *max_routes : micro_count();
}

double Instance::distance(const Stop& from, const Stop& to) const {
    return d_km[stop_index(from)][stop_index(to)];
}

double Instance::travel_h(const Stop& from, const Stop& to) const {
    return h_h[stop_index(from)][stop_index(to)];
}

double Instance::total_waste_kg() const {
    double total = 0.0;
    for (int i = 0; i < micro_count(); ++i) total += waste_kg(i);
    return total;
}

ServiceTime Instance::service_time_at(int pos) const {
    const MicroRoute& mr = micro_routes[pos];
    if (mr.service_time_override_h) return {*mr.service_time_override_h, false};
    return service_time(st_model, mr.internal_distance_km, waste_kg(pos));
}

double Instance::total_internal_distance_km() const {
    double total = 0.0;
    for (const auto& mr : micro_routes) total += mr.internal_distance_km;
    return total;
}

void Instance::validate() const {
    if (capacity_kg <= 0.0) throw InvariantViolation("capacity_Q must be > 0");
    if (time_limit_h <= 0.0) throw InvariantViolation("time_limit_T must be > 0");
    if (st_model.intercept_kmh <= 0.0)
        throw InvariantViolation("service-time intercept must be > 0");
    if (st_model.slope < 0.0) throw InvariantViolation("service-time slope must be >= 0");
    if (st_model.min_speed_floor_kmh <= 0.0)
        throw InvariantViolation("service-time speed floor must be > 0");
    if (waste_fraction_applied <= 0.0)
        throw InvariantViolation("waste fraction must be > 0");

    if (case_kind == CaseKind::CurrentSituation) {
        if (transfer)
            throw InvariantViolation("transfer record is only valid for the transfer-station case");
        if (max_routes && *max_routes < 1)
            throw InvariantViolation("max_routes_K must be >= 1");
    } else {
        if (max_routes)
            throw InvariantViolation("max_routes_K is only valid for the current-situation case");
        if (transfer && transfer->large_capacity_kg <= 0.0)
            throw InvariantViolation("transfer large_capacity must be > 0");
        if (transfer && transfer->roundtrip_to_landfill_km < 0.0)
            throw InvariantViolation("transfer roundtrip distance must be >= 0");
    }

    std::set<int> ids;
    for (const auto& mr : micro_routes) {
        if (mr.id < 1)
            throw InvariantViolation("micro-route ids must be positive, got " +
                                     std::to_string(mr.id));
        if (mr.internal_distance_km <= 0.0)
            throw InvariantViolation("micro-route " + std::to_string(mr.id) +
                                     ": internal_distance must be > 0");
        if (mr.base_waste_kg < 0.0)
            throw InvariantViolation("micro-route " + std::to_string(mr.id) +
                                     ": base_waste must be >= 0");
        if (!ids.insert(mr.id).second)
            throw InvariantViolation("duplicate micro-route id " + std::to_string(mr.id));
    }

    const int expected = micro_count() + (has_landfill() ? 2 : 1);
    if (stop_count() != expected)
        throw InvariantViolation("d matrix is " + std::to_string(stop_count()) + "x" +
                                 std::to_string(stop_count()) + ", expected " +
                                 std::to_string(expected));
    if (static_cast<int>(h_h.size()) != expected)
        throw InvariantViolation("h matrix size does not match the stop set");
    for (int i = 0; i < expected; ++i) {
        if (static_cast<int>(d_km[i].size()) != expected ||
            static_cast<int>(h_h[i].size()) != expected)
            throw InvariantViolation("distance/time matrices must be square");
        if (d_km[i][i] != 0.0 || h_h[i][i] != 0.0)
            throw InvariantViolation("matrix diagonals must be 0");
        for (int j = 0; j < expected; ++j) {
            if (d_km[i][j] < 0.0) throw InvariantViolation("negative distance entry");
            if (h_h[i][j] < 0.0) throw InvariantViolation("negative travel-time entry");
            if (!std::isfinite(d_km[i][j]) || !std::isfinite(h_h[i][j]))
                throw InvariantViolation("non-finite matrix entry");
        }
    }

    for (int i = 0; i < micro_count(); ++i) {
        if (waste_kg(i) > capacity_kg)
            throw InfeasibleDemand("micro-route " + std::to_string(micro_routes[i].id) +
                                   " waste " + std::to_string(waste_kg(i)) +
                                   " kg exceeds vehicle capacity");
    }
}

Instance scale_scenario(const Instance& instance, const Scenario& scenario) {
    if (scenario.waste_fraction <= 0.0)
        throw InvariantViolation("waste_fraction must be > 0");
    if (scenario.waste_fraction == 1.0) return instance;

    Instance scaled = instance;
    scaled.waste_fraction_applied = instance.waste_fraction_applied * scenario.waste_fraction;
    // Recorded times are only valid for the waste level they were taken at.
    for (auto& mr : scaled.micro_routes) mr.service_time_override_h.reset();
    for (int i = 0; i < scaled.micro_count(); ++i) {
        if (scaled.waste_kg(i) > scaled.capacity_kg)
            throw InfeasibleDemand("scaling by " + std::to_string(scenario.waste_fraction) +
                                   " puts micro-route " +
                                   std::to_string(scaled.micro_routes[i].id) +
                                   " over vehicle capacity");
    }
    return scaled;
}

namespace {

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key)) throw SchemaError("missing field '" + key + "'");
    if (!j[key].is_number()) throw SchemaError("field '" + key + "' must be a number");
    return j[key].get<double>();
}

std::vector<std::vector<double>> read_matrix(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array())
        throw SchemaError("missing matrix '" + key + "'");
    std::vector<std::vector<double>> m;
    for (const auto& row : j[key]) {
        if (!row.is_array()) throw SchemaError("matrix '" + key + "' rows must be arrays");
        std::vector<double> r;
        for (const auto& v : row) {
            if (!v.is_number()) throw SchemaError("matrix '" + key + "' entries must be numbers");
            r.push_back(v.get<double>());
        }
        m.push_back(std::move(r));
    }
    return m;
}

}  // namespace

Instance load_instance(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("instance is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("instance must be a JSON object");

    Instance inst;
    if (!j.contains("case_kind") || !j["case_kind"].is_string())
        throw SchemaError("missing field 'case_kind'");
    inst.case_kind = case_kind_from_string(j["case_kind"].get<std::string>());
    inst.capacity_kg = require_number(j, "capacity_Q");
    inst.time_limit_h = require_number(j, "time_limit_T");
    if (j.contains("max_routes_K")) {
        if (!j["max_routes_K"].is_number_integer())
            throw SchemaError("max_routes_K must be an integer");
        inst.max_routes = j["max_routes_K"].get<int>();
    }
    if (j.contains("transfer")) {
        const auto& t = j["transfer"];
        if (!t.is_object()) throw SchemaError("transfer must be an object");
        TransferInfo info;
        info.large_capacity_kg = require_number(t, "large_capacity");
        info.roundtrip_to_landfill_km = require_number(t, "roundtrip_to_landfill");
        inst.transfer = info;
    }
    if (j.contains("service_time_model")) {
        const auto& m = j["service_time_model"];
        if (!m.is_object()) throw SchemaError("service_time_model must be an object");
        inst.st_model.intercept_kmh = require_number(m, "intercept");
        inst.st_model.slope = require_number(m, "slope");
        if (m.contains("min_speed_floor"))
            inst.st_model.min_speed_floor_kmh = require_number(m, "min_speed_floor");
    }

    if (!j.contains("micro_routes") || !j["micro_routes"].is_array())
        throw SchemaError("missing field 'micro_routes'");
    for (const auto& mj : j["micro_routes"]) {
        if (!mj.is_object()) throw SchemaError("micro_routes entries must be objects");
        MicroRoute mr;
        if (!mj.contains("id") || !mj["id"].is_number_integer())
            throw SchemaError("micro-route entries need an integer 'id'");
        mr.id = mj["id"].get<int>();
        mr.internal_distance_km = require_number(mj, "internal_distance_km");
        mr.base_waste_kg = require_number(mj, "base_waste_kg");
        if (mj.contains("area_km2")) mr.area_km2 = require_number(mj, "area_km2");
        if (mj.contains("service_time_h")) mr.service_time_override_h = require_number(mj, "service_time_h");
        inst.micro_routes.push_back(mr);
    }

    if (!j.contains("stops") || !j["stops"].is_array())
        throw SchemaError("missing field 'stops'");
    const auto& stops = j["stops"];
    if (stops.empty() || !stops[0].is_string() || stops[0].get<std::string>() != "depot")
        throw SchemaError("stops must start with \"depot\"");
    size_t pos = 1;
    const bool wants_landfill = inst.case_kind == CaseKind::CurrentSituation;
    const bool file_has_landfill =
        stops.size() > 1 && stops[1].is_string() && stops[1].get<std::string>() == "landfill";
    if (wants_landfill && !file_has_landfill)
        throw InvariantViolation("current-situation instance is missing the landfill stop row");
    if (!wants_landfill && file_has_landfill)
        throw InvariantViolation("transfer-station instance must not define a landfill stop");
    if (file_has_landfill) pos = 2;
    std::vector<int> stop_ids;
    for (; pos < stops.size(); ++pos) {
        if (!stops[pos].is_number_integer())
            throw SchemaError("stops after depot/landfill must be micro-route ids");
        stop_ids.push_back(stops[pos].get<int>());
    }
    std::vector<int> declared;
    for (const auto& mr : inst.micro_routes) declared.push_back(mr.id);
    if (stop_ids != declared)
        throw SchemaError("stops id list must match micro_routes order");

    inst.d_km = read_matrix(j, "d_km");
    inst.h_h = read_matrix(j, "h_h");

    inst.validate();
    return inst;
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open instance file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_instance(ss.str());
}

std::string save_instance(const Instance& instance) {
    json j;
    j["case_kind"] = to_string(instance.case_kind);
    j["capacity_Q"] = instance.capacity_kg;
    j["time_limit_T"] = instance.time_limit_h;
    if (instance.max_routes) j["max_routes_K"] = *instance.max_routes;
    if (instance.transfer) {
        j["transfer"] = {{"large_capacity", instance.transfer->large_capacity_kg},
                         {"roundtrip_to_landfill", instance.transfer->roundtrip_to_landfill_km}};
    }
    j["service_time_model"] = {{"intercept", instance.st_model.intercept_kmh},
                               {"slope", instance.st_model.slope},
                               {"min_speed_floor", instance.st_model.min_speed_floor_kmh}};
    j["micro_routes"] = json::array();
    for (int i = 0; i < instance.micro_count(); ++i) {
        const auto& mr = instance.micro_routes[i];
        json mj = {{"id", mr.id},
                   {"internal_distance_km", mr.internal_distance_km},
                   // a saved instance stands alone: effective waste becomes its base
                   {"base_waste_kg", instance.waste_kg(i)}};
        if (mr.area_km2) mj["area_km2"] = *mr.area_km2;
        if (mr.service_time_override_h) mj["service_time_h"] = *mr.service_time_override_h;
        j["micro_routes"].push_back(mj);
    }
    j["stops"] = json::array();
    j["stops"].push_back("depot");
    if (instance.has_landfill()) j["stops"].push_back("landfill");
    for (const auto& mr : instance.micro_routes) j["stops"].push_back(mr.id);
    j["d_km"] = instance.d_km;
    j["h_h"] = instance.h_h;
    return j.dump(2) + "\n";
}

}  // namespace mrseq
