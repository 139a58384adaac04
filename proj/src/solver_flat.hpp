#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "mrseq/instance.hpp"
#include "mrseq/plan.hpp"

namespace mrseq::detail {

constexpr double kTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Flattened view shared by the solvers: stop 0 is the depot, stop 1 the
// landfill when present, micro-routes follow in instance order.
struct Flat {
    const Instance* inst = nullptr;
    int n = 0;
    int depot = 0;
    int landfill = -1;  // -1 for transfer-station instances
    std::vector<int> stop_of_micro;  // micro position -> stop index
    std::vector<double> q;           // by micro position
    std::vector<double> s;
    std::vector<int> by_id;  // micro positions sorted by ascending id
    double Q = 0.0, T = 0.0;

    explicit Flat(const Instance& instance) : inst(&instance) {
        n = instance.micro_count();
        landfill = instance.has_landfill() ? 1 : -1;
        const int base = instance.has_landfill() ? 2 : 1;
        for (int m = 0; m < n; ++m) {
            stop_of_micro.push_back(base + m);
            q.push_back(instance.waste_kg(m));
            s.push_back(instance.service_time_at(m).hours);
        }
        by_id.resize(n);
        for (int m = 0; m < n; ++m) by_id[m] = m;
        std::sort(by_id.begin(), by_id.end(), [&](int a, int b) {
            return instance.micro_routes[a].id < instance.micro_routes[b].id;
        });
        Q = instance.capacity_kg;
        T = instance.time_limit_h;
    }

    double d(int a, int b) const { return inst->d_km[a][b]; }
    double h(int a, int b) const { return inst->h_h[a][b]; }
    int id_of(int micro) const { return inst->micro_routes[micro].id; }
};

// Cost and feasibility of one route given as micro positions plus a dump
// pattern (dump_after[i] = landfill visit between micros i and i+1; the final
// landfill visit before the depot is implicit for the current-situation
// case). Arc cost only, Full time accounting.
inline bool route_feasible(const Flat& f, const std::vector<int>& micros,
                           const std::vector<bool>& dump_after, double& arc_cost) {
    arc_cost = 0.0;
    double load = 0.0, time = 0.0;
    int pos = f.depot;
    for (size_t i = 0; i < micros.size(); ++i) {
        const int stop = f.stop_of_micro[micros[i]];
        arc_cost += f.d(pos, stop);
        time += f.h(pos, stop) + f.s[micros[i]];
        load += f.q[micros[i]];
        if (load > f.Q + kTol) return false;
        pos = stop;
        const bool last = i + 1 == micros.size();
        if (f.landfill >= 0 && (last || (i < dump_after.size() && dump_after[i]))) {
            arc_cost += f.d(pos, f.landfill);
            time += f.h(pos, f.landfill);
            load = 0.0;
            pos = f.landfill;
        }
    }
    arc_cost += f.d(pos, f.depot);
    time += f.h(pos, f.depot);
    return time <= f.T + kTol;
}

inline double cheapest_in_arc(const Flat& f, int micro) {
    const int target = f.stop_of_micro[micro];
    double best = kInf;
    for (int s = 0; s < f.inst->stop_count(); ++s)
        if (s != target) best = std::min(best, f.d(s, target));
    return best;
}

inline Route expand_route(const Flat& f, const std::vector<int>& micros,
                          const std::vector<bool>& dump_after) {
    Route route{Stop::depot()};
    for (size_t i = 0; i < micros.size(); ++i) {
        route.push_back(Stop::micro(f.id_of(micros[i])));
        const bool last = i + 1 == micros.size();
        if (f.landfill >= 0 && (last || (i < dump_after.size() && dump_after[i])))
            route.push_back(Stop::landfill());
    }
    route.push_back(Stop::depot());
    return route;
}

}  // namespace mrseq::detail
