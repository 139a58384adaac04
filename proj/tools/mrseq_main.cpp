#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrseq/analysis.hpp"
#include "mrseq/annealing.hpp"
#include "mrseq/evaluator.hpp"
#include "mrseq/milp.hpp"
#include "mrseq/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitLimit = 4;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

mrseq::SolverChoice parse_solver(const std::string& name) {
    if (name == "exact") return mrseq::SolverChoice::Exact;
    if (name == "heuristic") return mrseq::SolverChoice::Heuristic;
    if (name == "brute") return mrseq::SolverChoice::Brute;
    throw CLI::ValidationError("--solver", "unknown solver '" + name + "'");
}

int cmd_validate(const std::vector<std::string>& paths) {
    bool all_ok = true;
    for (const auto& path : paths) {
        try {
            const mrseq::Instance inst = mrseq::load_instance_file(path);
            std::cout << path << ": OK (" << mrseq::to_string(inst.case_kind) << ", "
                      << inst.micro_count() << " micro-routes)\n";
            for (int i = 0; i < inst.micro_count(); ++i)
                if (inst.service_time_at(i).clamped)
                    std::cerr << path << ": warning: micro-route "
                              << inst.micro_routes[i].id
                              << " hits the speed floor at this waste level\n";
        } catch (const mrseq::InfeasibleDemand& e) {
            std::cout << path << ": InfeasibleDemand: " << e.what() << "\n";
            all_ok = false;
        } catch (const mrseq::InvariantViolation& e) {
            std::cout << path << ": InvariantViolation: " << e.what() << "\n";
            all_ok = false;
        } catch (const mrseq::SchemaError& e) {
            std::cout << path << ": SchemaError: " << e.what() << "\n";
            all_ok = false;
        } catch (const std::exception& e) {
            std::cout << path << ": error: " << e.what() << "\n";
            all_ok = false;
        }
    }
    return all_ok ? kExitOk : kExitInput;
}

struct SolveArgs {
    std::string instance_path;
    std::string solver = "exact";
    std::string case_kind;  // optional assertion on the file's kind
    double fraction = 1.0;
    std::uint64_t seed = 1;
    std::uint64_t max_nodes = 0;
    double max_seconds = 0.0;
    int restarts = 4;
    std::string out;
};

void check_case(const mrseq::Instance& inst, const std::string& expected) {
    if (!expected.empty() && mrseq::to_string(inst.case_kind) != expected)
        throw mrseq::InvariantViolation("instance is a " + mrseq::to_string(inst.case_kind) +
                                        " case, --case asked for " + expected);
}

int cmd_solve(const SolveArgs& args) {
    mrseq::Instance inst = mrseq::load_instance_file(args.instance_path);
    check_case(inst, args.case_kind);
    if (args.fraction != 1.0) inst = mrseq::scale_scenario(inst, {args.fraction});

    mrseq::SolveResult result;
    const mrseq::SolverChoice choice = parse_solver(args.solver);
    if (choice == mrseq::SolverChoice::Brute) {
        result = mrseq::solve_brute_force(inst);
    } else if (choice == mrseq::SolverChoice::Exact) {
        result = mrseq::solve_exact(inst, {args.max_nodes, args.max_seconds});
    } else {
        mrseq::AnnealingParams params;
        params.seed = args.seed;
        params.restarts = args.restarts;
        result = mrseq::solve_heuristic(inst, params);
    }

    std::cerr << "solved in " << result.wall_time_s << " s, " << result.nodes_explored
              << (choice == mrseq::SolverChoice::Heuristic ? " moves" : " nodes") << "\n";

    if (!result.plan) {
        if (result.status == mrseq::SolveStatus::Infeasible) {
            std::cout << "status=" << to_string(result.status) << "\n";
            std::cerr << "instance is infeasible\n";
            return kExitInfeasible;
        }
        std::cout << "status=" << to_string(result.status) << "\n";
        std::cerr << "search limit reached without a feasible plan\n";
        return kExitLimit;
    }

    char line[160];
    std::snprintf(line, sizeof(line), "objective=%.2f status=%s gap=%.4f lower_bound=%.2f\n",
                  result.objective, to_string(result.status).c_str(), result.gap,
                  result.lower_bound);
    std::cout << line;

    if (!args.out.empty()) {
        const mrseq::PlanMetrics metrics = mrseq::evaluate_plan(inst, *result.plan);
        write_file(args.out + ".plan.json", mrseq::save_plan(*result.plan));
        write_file(args.out + ".metrics.json", mrseq::metrics_json(*result.plan, metrics));
        write_file(args.out + ".metrics.txt",
                   mrseq::metrics_table(inst, *result.plan, metrics));
        write_file(args.out + ".result.json", mrseq::save_solve_result(result));
    }
    return kExitOk;
}

struct SweepArgs {
    std::string cs_day, cs_night;
    std::vector<std::string> ts_specs;  // NAME=day.json,night.json
    std::vector<double> fractions{0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.05, 1.1};
    std::string solver = "exact";
    std::uint64_t seed = 1;
    std::uint64_t max_nodes = 0;
    double max_seconds = 0.0;
    std::string out = "report";
};

int cmd_sweep(const SweepArgs& args) {
    mrseq::ShiftPair cs{mrseq::load_instance_file(args.cs_day),
                        mrseq::load_instance_file(args.cs_night)};
    std::vector<std::pair<std::string, mrseq::ShiftPair>> ts_cases;
    for (const auto& entry : args.ts_specs) {
        const auto eq = entry.find('=');
        const auto comma = entry.find(',', eq == std::string::npos ? 0 : eq);
        if (eq == std::string::npos || comma == std::string::npos)
            throw CLI::ValidationError("--ts", "expected NAME=day.json,night.json");
        const std::string name = entry.substr(0, eq);
        ts_cases.push_back(
            {name, {mrseq::load_instance_file(entry.substr(eq + 1, comma - eq - 1)),
                    mrseq::load_instance_file(entry.substr(comma + 1))}});
    }
    if (ts_cases.empty())
        throw CLI::ValidationError("--ts", "a sweep needs at least one transfer-station case");

    mrseq::SweepOptions options;
    options.solver = parse_solver(args.solver);
    options.limits = {args.max_nodes, args.max_seconds};
    options.params.seed = args.seed;

    const mrseq::ScenarioReport report =
        mrseq::run_sweep(cs, ts_cases, args.fractions, options);

    write_file(args.out + ".csv", mrseq::report_csv(report));
    write_file(args.out + ".txt", mrseq::report_text(report));
    write_file(args.out + ".plot_distance.csv", mrseq::plot_distance_csv(report));
    write_file(args.out + ".plot_vehicles.csv", mrseq::plot_vehicles_csv(report));
    std::cout << mrseq::report_text(report);

    int full_rows = 0;
    for (const auto& row : report.rows) {
        bool ok = row.cs.ok;
        for (const auto& cell : row.ts) ok = ok && cell.ok;
        if (ok) ++full_rows;
        if (!row.cs.ok) std::cerr << "row " << row.fraction << ": cs: " << row.cs.error << "\n";
        for (size_t t = 0; t < row.ts.size(); ++t)
            if (!row.ts[t].ok)
                std::cerr << "row " << row.fraction << ": " << report.ts_names[t] << ": "
                          << row.ts[t].error << "\n";
    }
    return full_rows > 0 ? kExitOk : kExitInfeasible;
}

struct ExportArgs {
    std::string instance_path;
    std::string case_kind;
    std::string format = "mps";
    std::string time_accounting = "full";
    std::string degree_repair = "repaired";
    double fraction = 1.0;
    std::string out;
};

int cmd_export(const ExportArgs& args) {
    mrseq::Instance inst = mrseq::load_instance_file(args.instance_path);
    check_case(inst, args.case_kind);
    if (args.fraction != 1.0) inst = mrseq::scale_scenario(inst, {args.fraction});

    mrseq::MilpModel model;
    if (inst.case_kind == mrseq::CaseKind::CurrentSituation) {
        const auto form = args.time_accounting == "literal" ? mrseq::CsTimeForm::Literal
                                                            : mrseq::CsTimeForm::Full;
        model = mrseq::build_cs_model(inst, form);
    } else {
        const auto form = args.degree_repair == "literal" ? mrseq::TsDegreeForm::Literal
                                                          : mrseq::TsDegreeForm::Repaired;
        if (form == mrseq::TsDegreeForm::Literal)
            std::cerr << "warning: the literal degree rows leave no room for depot arcs; "
                         "this model form is infeasible for any nonempty instance\n";
        model = mrseq::build_ts_model(inst, form);
    }

    const auto format =
        args.format == "lp" ? mrseq::ExportFormat::LP : mrseq::ExportFormat::MPS;
    const std::string text = mrseq::export_model(model, format);
    if (args.out.empty()) {
        std::cout << text;
    } else {
        write_file(args.out, text);
    }

    size_t binaries = 0;
    for (const auto& v : model.variables)
        if (v.kind == mrseq::VarKind::Binary) ++binaries;
    std::cout << "variables=" << model.variables.size() << " binaries=" << binaries
              << " constraints=" << model.constraints.size() << "\n";
    return kExitOk;
}

int run(int argc, char** argv) {
    CLI::App app{"sequencing of fixed waste-collection micro-routes into vehicle routes"};
    app.require_subcommand(1);
    app.set_config("--config");

    auto* validate = app.add_subcommand("validate", "check instance files");
    std::vector<std::string> validate_paths;
    validate->add_option("files", validate_paths, "instance files")->required();

    auto* solve = app.add_subcommand("solve", "solve one shift instance");
    SolveArgs solve_args;
    solve->add_option("--instance", solve_args.instance_path, "instance file")->required();
    solve->add_option("--solver", solve_args.solver, "exact | heuristic | brute");
    solve->add_option("--case", solve_args.case_kind,
                      "require current_situation or transfer_station");
    solve->add_option("--fraction", solve_args.fraction, "waste scenario fraction");
    solve->add_option("--seed", solve_args.seed, "heuristic seed");
    solve->add_option("--restarts", solve_args.restarts, "heuristic restarts");
    solve->add_option("--max-nodes", solve_args.max_nodes, "exact solver node limit");
    solve->add_option("--max-seconds", solve_args.max_seconds, "exact solver time limit");
    solve->add_option("--out", solve_args.out, "output file prefix");

    auto* sweep = app.add_subcommand("sweep", "scenario sweep and comparison report");
    SweepArgs sweep_args;
    sweep->add_option("--cs-day", sweep_args.cs_day, "current-situation day shift")
        ->required();
    sweep->add_option("--cs-night", sweep_args.cs_night, "current-situation night shift")
        ->required();
    sweep->add_option("--ts", sweep_args.ts_specs,
                      "transfer-station case as NAME=day.json,night.json (repeatable)");
    sweep->add_option("--fractions", sweep_args.fractions, "waste fractions");
    sweep->add_option("--solver", sweep_args.solver, "exact | heuristic | brute");
    sweep->add_option("--seed", sweep_args.seed, "heuristic seed");
    sweep->add_option("--max-nodes", sweep_args.max_nodes, "exact solver node limit");
    sweep->add_option("--max-seconds", sweep_args.max_seconds, "exact solver time limit");
    sweep->add_option("--out", sweep_args.out, "output file prefix");

    auto* exp = app.add_subcommand("export", "write a model as MPS or LP text");
    ExportArgs export_args;
    exp->add_option("--instance", export_args.instance_path, "instance file")->required();
    exp->add_option("--format", export_args.format, "mps | lp");
    exp->add_option("--case", export_args.case_kind,
                    "require current_situation or transfer_station");
    exp->add_option("--fraction", export_args.fraction, "waste scenario fraction");
    exp->add_option("--time-accounting", export_args.time_accounting,
                    "full | literal (current-situation duration row)");
    exp->add_option("--degree-repair", export_args.degree_repair,
                    "repaired | literal (transfer-station degree rows)");
    exp->add_option("--out", export_args.out, "output file (stdout when absent)");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(validate)) return cmd_validate(validate_paths);
        if (app.got_subcommand(solve)) return cmd_solve(solve_args);
        if (app.got_subcommand(sweep)) return cmd_sweep(sweep_args);
        if (app.got_subcommand(exp)) return cmd_export(export_args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    } catch (const mrseq::InfeasibleDemand& e) {
        std::cerr << "InfeasibleDemand: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const mrseq::SchemaError& e) {
        std::cerr << "SchemaError: " << e.what() << "\n";
        return kExitInput;
    } catch (const mrseq::InvariantViolation& e) {
        std::cerr << "InvariantViolation: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
