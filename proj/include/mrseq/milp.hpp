#pragma once

#include <map>
#include <string>
#include <vector>

#include "mrseq/evaluator.hpp"
#include "mrseq/instance.hpp"
#include "mrseq/plan.hpp"

namespace mrseq {

enum class VarKind { Binary, Continuous };
enum class ConstraintSense { LessEqual, Equal, GreaterEqual };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = 0.0;
};

struct LinearTerm {
    int var = 0;  // index into MilpModel::variables
    double coeff = 0.0;
};

struct LinearConstraint {
    std::string name;
    std::vector<LinearTerm> terms;
    ConstraintSense sense = ConstraintSense::LessEqual;
    double rhs = 0.0;
};

// Solver-independent linear program: declared variables, linear rows and a
// minimization objective. Immutable once built.
struct MilpModel {
    std::string name;
    std::vector<Variable> variables;
    std::vector<LinearConstraint> constraints;
    std::vector<LinearTerm> objective;  // minimize

    int var_index(const std::string& name) const;  // -1 when absent
    double objective_value(const std::map<std::string, double>& assignment) const;

    // Largest absolute constraint or bound breach under the assignment.
    // Missing variables count as 0. Returns the offending row name too.
    struct CheckResult {
        double worst_violation = 0.0;
        std::string worst_row;
    };
    CheckResult check_assignment(const std::map<std::string, double>& assignment) const;
};

// How the current-situation time-limit row charges duration. Literal is the
// printed form (micro-to-micro legs only); Full also charges depot- and
// landfill-incident travel plus the first collection after each departure.
// Full matches the evaluator.
enum class CsTimeForm { Literal, Full };

// Degree rows of the transfer-station model. Literal restricts successor and
// predecessor sums to micro-routes only, which leaves no room for depot arcs
// and is infeasible for any nonempty instance; it is kept for reference.
// Repaired ranges over micro-routes plus the depot.
enum class TsDegreeForm { Literal, Repaired };

// Three-index vehicle-flow model with the landfill as intermediate facility.
MilpModel build_cs_model(const Instance& instance, CsTimeForm time_form = CsTimeForm::Full);

// Two-index load/time-chained model based at the transfer station.
MilpModel build_ts_model(const Instance& instance,
                         TsDegreeForm degree_form = TsDegreeForm::Repaired);

enum class ExportFormat { MPS, LP };

std::string export_model(const MilpModel& model, ExportFormat format);

// The 0/1 arc values (plus load/time chains) a plan induces in the matching
// model. Inverse direction of extract_plan; used for cross-checks.
std::map<std::string, double> induced_assignment(const Instance& instance,
                                                 const RoutingPlan& plan);

// Reads routes off an integral, constraint-satisfying assignment.
// Throws FractionalSolution, ConstraintViolation, DisconnectedTour.
RoutingPlan extract_plan(const Instance& instance, const MilpModel& model,
                         const std::map<std::string, double>& assignment);

std::map<std::string, double> load_assignment(const std::string& text);

}  // namespace mrseq
