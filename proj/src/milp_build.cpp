#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "mrseq/milp.hpp"

namespace mrseq {

namespace {

std::string stop_label(const Instance& inst, int stop_index) {
    const Stop s = inst.stop_at(stop_index);
    switch (s.kind) {
        case StopKind::Depot: return "0";
        case StopKind::Landfill: return "L";
        case StopKind::Micro: return std::to_string(s.micro_id);
    }
    return "?";
}

class ModelBuilder {
public:
    explicit ModelBuilder(std::string name) { model_.name = std::move(name); }

    int add_var(const std::string& name, VarKind kind, double lower, double upper) {
        if (!names_.insert(name).second) throw NameCollision("duplicate variable name " + name);
        model_.variables.push_back({name, kind, lower, upper});
        return static_cast<int>(model_.variables.size()) - 1;
    }

    void add_constraint(const std::string& name, std::vector<LinearTerm> terms,
                        ConstraintSense sense, double rhs) {
        if (!row_names_.insert(name).second)
            throw NameCollision("duplicate constraint name " + name);
        for (const auto& t : terms)
            if (t.var < 0 || t.var >= static_cast<int>(model_.variables.size()))
                throw std::logic_error("constraint term references an undeclared variable");
        model_.constraints.push_back({name, std::move(terms), sense, rhs});
    }

    void set_objective(std::vector<LinearTerm> terms) { model_.objective = std::move(terms); }

    MilpModel take() { return std::move(model_); }

private:
    MilpModel model_;
    std::set<std::string> names_;
    std::set<std::string> row_names_;
};

}  // namespace

int MilpModel::var_index(const std::string& name) const {
    for (size_t i = 0; i < variables.size(); ++i)
        if (variables[i].name == name) return static_cast<int>(i);
    return -1;
}

double MilpModel::objective_value(const std::map<std::string, double>& assignment) const {
    double total = 0.0;
    for (const auto& t : objective) {
        auto it = assignment.find(variables[t.var].name);
        if (it != assignment.end()) total += t.coeff * it->second;
    }
    return total;
}

MilpModel::CheckResult MilpModel::check_assignment(
    const std::map<std::string, double>& assignment) const {
    CheckResult result;
    auto value_of = [&](int var) {
        auto it = assignment.find(variables[var].name);
        return it == assignment.end() ? 0.0 : it->second;
    };
    auto note = [&](double breach, const std::string& row) {
        if (breach > result.worst_violation) {
            result.worst_violation = breach;
            result.worst_row = row;
        }
    };
    for (size_t i = 0; i < variables.size(); ++i) {
        const double v = value_of(static_cast<int>(i));
        note(variables[i].lower - v, "lb(" + variables[i].name + ")");
        note(v - variables[i].upper, "ub(" + variables[i].name + ")");
    }
    for (const auto& c : constraints) {
        double lhs = 0.0;
        for (const auto& t : c.terms) lhs += t.coeff * value_of(t.var);
        switch (c.sense) {
            case ConstraintSense::LessEqual: note(lhs - c.rhs, c.name); break;
            case ConstraintSense::GreaterEqual: note(c.rhs - lhs, c.name); break;
            case ConstraintSense::Equal: note(std::abs(lhs - c.rhs), c.name); break;
        }
    }
    return result;
}

MilpModel build_cs_model(const Instance& instance, CsTimeForm time_form) {
    if (instance.case_kind != CaseKind::CurrentSituation)
        throw WrongCaseKind("build_cs_model needs a current-situation instance");

    const int S = instance.stop_count();
    const int depot = instance.depot_index();
    const int landfill = instance.landfill_index();
    const int K = instance.routes_cap();
    const double Q = instance.capacity_kg;
    const double T = instance.time_limit_h;

    auto is_micro = [&](int s) { return s != depot && s != landfill; };
    auto label = [&](int s) { return stop_label(instance, s); };

    std::vector<double> waste(S, 0.0), service(S, 0.0);
    for (int s = 0; s < S; ++s)
        if (is_micro(s)) {
            const int pos = s - 2;
            waste[s] = instance.waste_kg(pos);
            service[s] = instance.service_time_at(pos).hours;
        }

    ModelBuilder b("cs_" + std::to_string(instance.micro_count()) + "m_" + std::to_string(K) +
                   "k");

    // Arcs from a micro-route straight back to the depot are never allowed,
    // so those variables are not declared at all.
    auto arc_allowed = [&](int i, int j) { return i != j && !(is_micro(i) && j == depot); };

    std::vector<std::vector<std::vector<int>>> x(
        S, std::vector<std::vector<int>>(S, std::vector<int>(K + 1, -1)));
    std::vector<std::vector<std::vector<int>>> v(
        S, std::vector<std::vector<int>>(S, std::vector<int>(K + 1, -1)));

    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j)
            for (int k = 1; k <= K; ++k)
                if (arc_allowed(i, j))
                    x[i][j][k] = b.add_var(
                        "X_" + label(i) + "_" + label(j) + "_" + std::to_string(k),
                        VarKind::Binary, 0.0, 1.0);
    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j)
            for (int k = 1; k <= K; ++k)
                if (i != j)
                    v[i][j][k] = b.add_var(
                        "V_" + label(i) + "_" + label(j) + "_" + std::to_string(k),
                        VarKind::Continuous, 0.0, std::numeric_limits<double>::infinity());

    std::vector<LinearTerm> obj;
    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j)
            for (int k = 1; k <= K; ++k)
                if (x[i][j][k] >= 0) obj.push_back({x[i][j][k], instance.d_km[i][j]});
    b.set_objective(std::move(obj));

    // every micro-route is left exactly once, over all vehicles
    for (int i = 0; i < S; ++i) {
        if (!is_micro(i)) continue;
        std::vector<LinearTerm> terms;
        for (int j = 0; j < S; ++j)
            for (int k = 1; k <= K; ++k)
                if (x[i][j][k] >= 0) terms.push_back({x[i][j][k], 1.0});
        b.add_constraint("visit_once_" + label(i), std::move(terms), ConstraintSense::Equal,
                         1.0);
    }

    // each vehicle leaves the depot at most once
    for (int k = 1; k <= K; ++k) {
        std::vector<LinearTerm> terms;
        for (int j = 0; j < S; ++j)
            if (x[depot][j][k] >= 0) terms.push_back({x[depot][j][k], 1.0});
        b.add_constraint("single_departure_" + std::to_string(k), std::move(terms),
                         ConstraintSense::LessEqual, 1.0);
    }

    // entering a stop implies leaving it
    for (int j = 0; j < S; ++j)
        for (int k = 1; k <= K; ++k) {
            std::vector<LinearTerm> terms;
            for (int i = 0; i < S; ++i) {
                if (x[i][j][k] >= 0) terms.push_back({x[i][j][k], 1.0});
                if (x[j][i][k] >= 0) terms.push_back({x[j][i][k], -1.0});
            }
            b.add_constraint("flow_balance_" + label(j) + "_" + std::to_string(k),
                             std::move(terms), ConstraintSense::Equal, 0.0);
        }

    // vehicles leave the landfill empty
    for (int i = 0; i < S; ++i) {
        if (i == landfill) continue;
        for (int k = 1; k <= K; ++k)
            b.add_constraint("empty_after_landfill_" + label(i) + "_" + std::to_string(k),
                             {{v[landfill][i][k], 1.0}}, ConstraintSense::Equal, 0.0);
    }

    // vehicles leave the depot empty
    for (int i = 0; i < S; ++i) {
        if (i == depot) continue;
        for (int k = 1; k <= K; ++k)
            b.add_constraint("empty_after_depot_" + label(i) + "_" + std::to_string(k),
                             {{v[depot][i][k], 1.0}}, ConstraintSense::Equal, 0.0);
    }

    // load grows by q_j across a visited micro-route; the big-M term switches
    // off for any incoming arc, landfill departures included
    for (int j = 0; j < S; ++j) {
        if (!is_micro(j)) continue;
        for (int k = 1; k <= K; ++k) {
            std::vector<LinearTerm> terms;
            for (int i = 0; i < S; ++i) {
                if (i == j) continue;
                if (i != landfill && v[i][j][k] >= 0) terms.push_back({v[i][j][k], 1.0});
                if (i != depot && v[j][i][k] >= 0) terms.push_back({v[j][i][k], -1.0});
                if (x[i][j][k] >= 0) terms.push_back({x[i][j][k], Q});
            }
            b.add_constraint("load_balance_" + label(j) + "_" + std::to_string(k),
                             std::move(terms), ConstraintSense::LessEqual, Q - waste[j]);
        }
    }

    // arc loads only on used arcs, capped at vehicle capacity; applies to the
    // unload legs into the landfill as well
    for (int i = 0; i < S; ++i) {
        if (!is_micro(i)) continue;
        for (int j = 0; j < S; ++j) {
            if (i == j || j == depot) continue;
            for (int k = 1; k <= K; ++k)
                b.add_constraint("capacity_link_" + label(i) + "_" + label(j) + "_" +
                                     std::to_string(k),
                                 {{v[i][j][k], 1.0}, {x[i][j][k], -Q}},
                                 ConstraintSense::LessEqual, 0.0);
        }
    }

    // arcs among micro-routes and the landfill need a depot departure into a
    // micro-route
    for (int i = 0; i < S; ++i) {
        if (i == depot) continue;
        for (int j = 0; j < S; ++j) {
            if (j == depot || i == j) continue;
            for (int k = 1; k <= K; ++k) {
                std::vector<LinearTerm> terms{{x[i][j][k], 1.0}};
                for (int g = 0; g < S; ++g)
                    if (is_micro(g) && x[depot][g][k] >= 0)
                        terms.push_back({x[depot][g][k], -1.0});
                b.add_constraint("depot_usage_" + label(i) + "_" + label(j) + "_" +
                                     std::to_string(k),
                                 std::move(terms), ConstraintSense::LessEqual, 0.0);
            }
        }
    }

    // shift duration
    for (int k = 1; k <= K; ++k) {
        std::vector<LinearTerm> terms;
        for (int i = 0; i < S; ++i)
            for (int j = 0; j < S; ++j) {
                if (x[i][j][k] < 0) continue;
                double coeff = 0.0;
                if (time_form == CsTimeForm::Literal) {
                    if (is_micro(i) && is_micro(j))
                        coeff = instance.h_h[i][j] + service[j];
                } else {
                    coeff = instance.h_h[i][j] + (is_micro(j) ? service[j] : 0.0);
                }
                if (coeff != 0.0) terms.push_back({x[i][j][k], coeff});
            }
        b.add_constraint("route_time_" + std::to_string(k), std::move(terms),
                         ConstraintSense::LessEqual, T);
    }

    return b.take();
}

MilpModel build_ts_model(const Instance& instance, TsDegreeForm degree_form) {
    if (instance.case_kind != CaseKind::TransferStation)
        throw WrongCaseKind("build_ts_model needs a transfer-station instance");

    const int S = instance.stop_count();
    const int depot = instance.depot_index();
    const double Q = instance.capacity_kg;
    const double T = instance.time_limit_h;

    auto label = [&](int s) { return stop_label(instance, s); };
    auto is_micro = [&](int s) { return s != depot; };

    std::vector<double> waste(S, 0.0), service(S, 0.0);
    for (int s = 1; s < S; ++s) {
        waste[s] = instance.waste_kg(s - 1);
        service[s] = instance.service_time_at(s - 1).hours;
    }

    ModelBuilder b("ts_" + std::to_string(instance.micro_count()) + "m");

    std::vector<std::vector<int>> y(S, std::vector<int>(S, -1));
    std::vector<int> u(S, -1), t(S, -1);

    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j)
            if (i != j)
                y[i][j] = b.add_var("Y_" + label(i) + "_" + label(j), VarKind::Binary, 0.0, 1.0);
    for (int i = 1; i < S; ++i)
        u[i] = b.add_var("U_" + label(i), VarKind::Continuous, waste[i], Q);
    for (int i = 0; i < S; ++i)
        t[i] = b.add_var("T_" + label(i), VarKind::Continuous, 0.0, T);

    std::vector<LinearTerm> obj;
    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j)
            if (y[i][j] >= 0) obj.push_back({y[i][j], instance.d_km[i][j]});
    b.set_objective(std::move(obj));

    // one successor and one predecessor per micro-route; the repaired form
    // lets them be the depot so routes can open and close
    for (int i = 1; i < S; ++i) {
        std::vector<LinearTerm> terms;
        for (int j = 0; j < S; ++j) {
            if (j == i) continue;
            if (degree_form == TsDegreeForm::Literal && !is_micro(j)) continue;
            terms.push_back({y[i][j], 1.0});
        }
        b.add_constraint("successor_" + label(i), std::move(terms), ConstraintSense::Equal, 1.0);
    }
    for (int i = 1; i < S; ++i) {
        std::vector<LinearTerm> terms;
        for (int j = 0; j < S; ++j) {
            if (j == i) continue;
            if (degree_form == TsDegreeForm::Literal && !is_micro(j)) continue;
            terms.push_back({y[j][i], 1.0});
        }
        b.add_constraint("predecessor_" + label(i), std::move(terms), ConstraintSense::Equal,
                         1.0);
    }

    // load chaining along used arcs; doubles as subtour elimination
    for (int i = 1; i < S; ++i)
        for (int j = 1; j < S; ++j) {
            if (i == j) continue;
            b.add_constraint("load_order_" + label(i) + "_" + label(j),
                             {{u[i], 1.0}, {u[j], -1.0}, {y[i][j], Q}},
                             ConstraintSense::LessEqual, Q - waste[j]);
        }

    // time chaining: travelling i->j finishes j no earlier than t_i + h + s_j
    for (int i = 0; i < S; ++i)
        for (int j = 1; j < S; ++j) {
            if (i == j) continue;
            b.add_constraint("time_order_" + label(i) + "_" + label(j),
                             {{t[i], 1.0}, {t[j], -1.0}, {y[i][j], T}},
                             ConstraintSense::LessEqual, T - service[j] - instance.h_h[i][j]);
        }

    // closing leg must fit the shift
    for (int i = 1; i < S; ++i)
        b.add_constraint("return_time_" + label(i), {{t[i], 1.0}, {y[i][depot], T}},
                         ConstraintSense::LessEqual, 2.0 * T - instance.h_h[i][depot]);

    return b.take();
}

}  // namespace mrseq
