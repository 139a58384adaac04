#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "mrseq/milp.hpp"

namespace mrseq {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void check_names(const MilpModel& model) {
    std::set<std::string> seen;
    for (const auto& v : model.variables) {
        if (v.name.size() > 255) throw NameCollision("variable name too long: " + v.name);
        if (!seen.insert(v.name).second)
            throw NameCollision("duplicate variable name " + v.name);
    }
    seen.clear();
    for (const auto& c : model.constraints) {
        if (c.name.size() > 255) throw NameCollision("constraint name too long: " + c.name);
        if (!seen.insert(c.name).second)
            throw NameCollision("duplicate constraint name " + c.name);
    }
}

std::string export_mps(const MilpModel& model) {
    std::ostringstream out;
    out << "NAME          " << (model.name.empty() ? "MODEL" : model.name) << "\n";
    out << "ROWS\n";
    out << " N  COST\n";
    for (const auto& c : model.constraints) {
        char sense = c.sense == ConstraintSense::LessEqual      ? 'L'
                     : c.sense == ConstraintSense::GreaterEqual ? 'G'
                                                                : 'E';
        out << " " << sense << "  " << c.name << "\n";
    }

    // column-major entries: objective first, then rows in declaration order
    std::vector<std::vector<std::pair<std::string, double>>> col_entries(
        model.variables.size());
    for (const auto& t : model.objective)
        col_entries[t.var].push_back({"COST", t.coeff});
    for (const auto& c : model.constraints)
        for (const auto& t : c.terms) col_entries[t.var].push_back({c.name, t.coeff});

    out << "COLUMNS\n";
    bool in_integer_block = false;
    int marker = 0;
    for (size_t i = 0; i < model.variables.size(); ++i) {
        const auto& var = model.variables[i];
        const bool wants_integer = var.kind == VarKind::Binary;
        if (wants_integer != in_integer_block) {
            out << "    MARKER" << marker << "  'MARKER'  "
                << (wants_integer ? "'INTORG'" : "'INTEND'") << "\n";
            in_integer_block = wants_integer;
            ++marker;
        }
        const auto& entries = col_entries[i];
        if (entries.empty()) {
            out << "    " << var.name << "  COST  0\n";
            continue;
        }
        for (size_t e = 0; e < entries.size(); e += 2) {
            out << "    " << var.name << "  " << entries[e].first << "  "
                << num(entries[e].second);
            if (e + 1 < entries.size())
                out << "  " << entries[e + 1].first << "  " << num(entries[e + 1].second);
            out << "\n";
        }
    }
    if (in_integer_block) out << "    MARKER" << marker << "  'MARKER'  'INTEND'\n";

    out << "RHS\n";
    for (const auto& c : model.constraints)
        if (c.rhs != 0.0) out << "    RHS  " << c.name << "  " << num(c.rhs) << "\n";

    out << "BOUNDS\n";
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& var : model.variables) {
        if (var.kind == VarKind::Binary) {
            out << " BV BND  " << var.name << "\n";
            continue;
        }
        if (var.lower != 0.0) out << " LO BND  " << var.name << "  " << num(var.lower) << "\n";
        if (var.upper != inf) out << " UP BND  " << var.name << "  " << num(var.upper) << "\n";
    }
    out << "ENDATA\n";
    return out.str();
}

void write_terms(std::ostringstream& out, const std::vector<LinearTerm>& terms,
                 const MilpModel& model) {
    int on_line = 0;
    if (terms.empty()) {
        out << " 0 " << (model.variables.empty() ? "x" : model.variables[0].name);
        return;
    }
    for (size_t i = 0; i < terms.size(); ++i) {
        const double c = terms[i].coeff;
        out << (c < 0 ? " - " : " + ") << num(std::abs(c)) << " "
            << model.variables[terms[i].var].name;
        if (++on_line == 5 && i + 1 < terms.size()) {
            out << "\n  ";
            on_line = 0;
        }
    }
}

std::string export_lp(const MilpModel& model) {
    std::ostringstream out;
    out << "\\ " << (model.name.empty() ? "model" : model.name) << "\n";
    out << "Minimize\n obj:";
    write_terms(out, model.objective, model);
    out << "\nSubject To\n";
    for (const auto& c : model.constraints) {
        out << " " << c.name << ":";
        write_terms(out, c.terms, model);
        const char* sense = c.sense == ConstraintSense::LessEqual      ? "<="
                            : c.sense == ConstraintSense::GreaterEqual ? ">="
                                                                       : "=";
        out << " " << sense << " " << num(c.rhs) << "\n";
    }
    out << "Bounds\n";
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& var : model.variables) {
        if (var.kind == VarKind::Binary) continue;
        if (var.upper == inf) {
            if (var.lower != 0.0) out << " " << var.name << " >= " << num(var.lower) << "\n";
        } else {
            out << " " << num(var.lower) << " <= " << var.name << " <= " << num(var.upper)
                << "\n";
        }
    }
    bool any_binary = false;
    for (const auto& var : model.variables)
        if (var.kind == VarKind::Binary) any_binary = true;
    if (any_binary) {
        out << "Binaries\n";
        int on_line = 0;
        for (const auto& var : model.variables) {
            if (var.kind != VarKind::Binary) continue;
            out << " " << var.name;
            if (++on_line == 6) {
                out << "\n";
                on_line = 0;
            }
        }
        if (on_line) out << "\n";
    }
    out << "End\n";
    return out.str();
}

}  // namespace

std::string export_model(const MilpModel& model, ExportFormat format) {
    check_names(model);
    return format == ExportFormat::MPS ? export_mps(model) : export_lp(model);
}

}  // namespace mrseq
