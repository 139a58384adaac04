#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli_harness.hpp"
#include "doctest.h"
#include "mrseq/evaluator.hpp"
#include "mrseq/instance.hpp"
#include "test_support.hpp"

using namespace mrseq;
namespace fs = std::filesystem;

using test::CliResult;
using test::run_cli;
using test::slurp;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    return test::fresh_dir("cli_" + name);
}

void write(const std::filesystem::path& path, const std::string& text) {
    test::write_file(path, text);
}

}  // namespace

TEST_CASE("validate accepts good files and names broken invariants") {
    const fs::path dir = fresh_dir("validate");
    std::mt19937_64 rng(501);
    const Instance good = test::random_instance(rng, 2, CaseKind::CurrentSituation);
    write(dir / "good.json", save_instance(good));

    CliResult ok = run_cli("validate good.json", dir);
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("OK") != std::string::npos);

    Instance bad = good;
    bad.d_km[0][1] = -4.0;
    write(dir / "bad.json", save_instance(bad));
    CliResult broken = run_cli("validate bad.json", dir);
    CHECK(broken.exit_code == 2);
    CHECK(broken.out.find("InvariantViolation") != std::string::npos);

    std::string no_landfill = save_instance(good);
    no_landfill.erase(no_landfill.find("\"landfill\","), 11);
    write(dir / "nolandfill.json", no_landfill);
    CliResult missing = run_cli("validate nolandfill.json", dir);
    CHECK(missing.exit_code == 2);
    CHECK(missing.out.find("InvariantViolation") != std::string::npos);

    CliResult both = run_cli("validate good.json bad.json", dir);
    CHECK(both.exit_code == 2);
}

TEST_CASE("solve writes plan, metrics and result files") {
    const fs::path dir = fresh_dir("solve");
    std::mt19937_64 rng(502);
    const Instance inst = test::random_instance(rng, 1, CaseKind::TransferStation);
    write(dir / "one.json", save_instance(inst));

    CliResult run = run_cli("solve --instance one.json --solver exact --out run", dir);
    CHECK(run.exit_code == 0);
    const double expected = inst.distance(Stop::depot(), Stop::micro(1)) +
                            inst.distance(Stop::micro(1), Stop::depot());
    char line[64];
    std::snprintf(line, sizeof(line), "objective=%.2f", expected);
    CHECK(run.out.find(line) != std::string::npos);
    CHECK(run.out.find("status=optimal") != std::string::npos);
    CHECK(fs::exists(dir / "run.plan.json"));
    CHECK(fs::exists(dir / "run.metrics.json"));
    CHECK(fs::exists(dir / "run.metrics.txt"));
    CHECK(fs::exists(dir / "run.result.json"));

    SUBCASE("repeating the run leaves byte-identical machine outputs") {
        const std::string plan = slurp(dir / "run.plan.json");
        const std::string metrics = slurp(dir / "run.metrics.json");
        const std::string result = slurp(dir / "run.result.json");
        CliResult again = run_cli("solve --instance one.json --solver exact --out run", dir);
        CHECK(again.exit_code == 0);
        CHECK(slurp(dir / "run.plan.json") == plan);
        CHECK(slurp(dir / "run.metrics.json") == metrics);
        CHECK(slurp(dir / "run.result.json") == result);
        CHECK(again.out == run.out);
    }
}

TEST_CASE("heuristic seeds vary plans but never feasibility") {
    const fs::path dir = fresh_dir("seeds");
    std::mt19937_64 rng(503);
    const Instance inst = test::random_instance(rng, 6, CaseKind::CurrentSituation);
    write(dir / "city.json", save_instance(inst));

    CliResult seven =
        run_cli("solve --instance city.json --solver heuristic --seed 7 --out s7", dir);
    CliResult eight =
        run_cli("solve --instance city.json --solver heuristic --seed 8 --out s8", dir);
    CHECK(seven.exit_code == 0);
    CHECK(eight.exit_code == 0);
    // both plans load and pass the evaluator
    for (const char* name : {"s7.plan.json", "s8.plan.json"}) {
        const RoutingPlan plan = load_plan(slurp(dir / name));
        CHECK(evaluate_plan(inst, plan).feasible);
    }
}

TEST_CASE("infeasible instances exit 3") {
    const fs::path dir = fresh_dir("infeasible");
    std::mt19937_64 rng(504);
    Instance inst = test::random_instance(rng, 2, CaseKind::CurrentSituation);
    // a recorded collection time longer than the shift passes validation but
    // cannot be routed
    inst.micro_routes[0].service_time_override_h = inst.time_limit_h * 3.0;
    write(dir / "stuck.json", save_instance(inst));
    CliResult run = run_cli("solve --instance stuck.json --solver exact", dir);
    CHECK(run.exit_code == 3);
    CliResult heur = run_cli("solve --instance stuck.json --solver heuristic", dir);
    CHECK(heur.exit_code == 3);
}

TEST_CASE("a node budget too small for any incumbent exits 4") {
    const fs::path dir = fresh_dir("limit");
    std::mt19937_64 rng(505);
    const Instance inst = test::random_instance(rng, 6, CaseKind::CurrentSituation);
    write(dir / "city.json", save_instance(inst));
    CliResult run = run_cli("solve --instance city.json --solver exact --max-nodes 2", dir);
    CHECK(run.exit_code == 4);
    CHECK(run.out.find("limit_reached") != std::string::npos);
}

TEST_CASE("export prints counts and repeats byte-identically") {
    const fs::path dir = fresh_dir("export");
    std::mt19937_64 rng(506);
    Instance inst = test::random_instance(rng, 2, CaseKind::CurrentSituation);
    inst.max_routes = 2;
    write(dir / "two.json", save_instance(inst));

    CliResult mps = run_cli("export --instance two.json --format mps --out model.mps", dir);
    CHECK(mps.exit_code == 0);
    // counts from the hand enumeration for two micro-routes and two vehicles
    CHECK(mps.out.find("variables=44 binaries=20 constraints=50") != std::string::npos);

    const std::string first = slurp(dir / "model.mps");
    run_cli("export --instance two.json --format mps --out model.mps", dir);
    CHECK(slurp(dir / "model.mps") == first);

    CliResult lp = run_cli("export --instance two.json --format lp --out model.lp", dir);
    CHECK(lp.exit_code == 0);
    CHECK(slurp(dir / "model.lp").find("Minimize") != std::string::npos);

    SUBCASE("schema problems exit 2") {
        write(dir / "junk.json", "{");
        CliResult junk = run_cli("export --instance junk.json", dir);
        CHECK(junk.exit_code == 2);
    }
}

TEST_CASE("literal transfer-station export warns on stderr") {
    const fs::path dir = fresh_dir("literal");
    std::mt19937_64 rng(507);
    const Instance inst = test::random_instance(rng, 2, CaseKind::TransferStation);
    write(dir / "ts.json", save_instance(inst));
    CliResult run = run_cli(
        "export --instance ts.json --format lp --degree-repair literal --out lit.lp", dir);
    CHECK(run.exit_code == 0);
    CHECK(run.err.find("infeasible") != std::string::npos);
    CHECK(fs::exists(dir / "lit.lp"));
}

TEST_CASE("sweep writes the report family and stays deterministic") {
    const fs::path dir = fresh_dir("sweep");
    std::mt19937_64 rng(508);
    write(dir / "cs_day.json",
          save_instance(test::random_instance(rng, 3, CaseKind::CurrentSituation)));
    write(dir / "cs_night.json",
          save_instance(test::random_instance(rng, 2, CaseKind::CurrentSituation)));
    write(dir / "ts_day.json",
          save_instance(test::random_instance(rng, 3, CaseKind::TransferStation)));
    write(dir / "ts_night.json",
          save_instance(test::random_instance(rng, 2, CaseKind::TransferStation)));

    const std::string args =
        "sweep --cs-day cs_day.json --cs-night cs_night.json "
        "--ts ts1=ts_day.json,ts_night.json --fractions 0.5 1.0 --solver brute "
        "--out report";
    CliResult run = run_cli(args, dir);
    CHECK(run.exit_code == 0);
    for (const char* name : {"report.csv", "report.txt", "report.plot_distance.csv",
                             "report.plot_vehicles.csv"})
        CHECK(fs::exists(dir / name));

    const std::string csv = slurp(dir / "report.csv");
    CHECK(csv.find("average") != std::string::npos);

    // waste doubles between the two fractions
    std::istringstream lines(csv);
    std::string header, half, full;
    std::getline(lines, header);
    std::getline(lines, half);
    std::getline(lines, full);
    const double w_half = std::stod(half.substr(half.find(',') + 1));
    const double w_full = std::stod(full.substr(full.find(',') + 1));
    CHECK(w_full == doctest::Approx(2.0 * w_half).epsilon(1e-6));

    const std::string before = csv;
    run_cli(args, dir);
    CHECK(slurp(dir / "report.csv") == before);

    SUBCASE("a sweep without any transfer-station case exits 2") {
        CliResult bare = run_cli(
            "sweep --cs-day cs_day.json --cs-night cs_night.json --solver brute", dir);
        CHECK(bare.exit_code == 2);
    }
}

TEST_CASE("a config file supplies flags and explicit flags win") {
    const fs::path dir = fresh_dir("config");
    std::mt19937_64 rng(510);
    const Instance inst = test::random_instance(rng, 2, CaseKind::TransferStation);
    write(dir / "two.json", save_instance(inst));
    write(dir / "run.toml",
          "[solve]\n"
          "instance=\"two.json\"\n"
          "solver=\"brute\"\n"
          "out=\"fromconfig\"\n");

    CliResult run = run_cli("--config run.toml solve", dir);
    CHECK(run.exit_code == 0);
    CHECK(fs::exists(dir / "fromconfig.result.json"));
    CHECK(slurp(dir / "fromconfig.result.json").find("\"status\": \"optimal\"") !=
          std::string::npos);

    // the command line overrides the configured output prefix
    CliResult forced = run_cli("--config run.toml solve --out forced", dir);
    CHECK(forced.exit_code == 0);
    CHECK(fs::exists(dir / "forced.result.json"));
}

TEST_CASE("single-fraction sweep has one data row plus the averages row") {
    const fs::path dir = fresh_dir("sweep_one");
    std::mt19937_64 rng(509);
    write(dir / "cs_day.json",
          save_instance(test::random_instance(rng, 2, CaseKind::CurrentSituation)));
    write(dir / "cs_night.json",
          save_instance(test::random_instance(rng, 2, CaseKind::CurrentSituation)));
    write(dir / "ts_day.json",
          save_instance(test::random_instance(rng, 2, CaseKind::TransferStation)));
    write(dir / "ts_night.json",
          save_instance(test::random_instance(rng, 2, CaseKind::TransferStation)));
    CliResult run = run_cli(
        "sweep --cs-day cs_day.json --cs-night cs_night.json "
        "--ts ts1=ts_day.json,ts_night.json --fractions 1.0 --solver brute --out r",
        dir);
    CHECK(run.exit_code == 0);
    const std::string csv = slurp(dir / "r.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + row + averages
    // with one row the averages equal that row's percentages
    std::istringstream lines(csv);
    std::string header, row, avg;
    std::getline(lines, header);
    std::getline(lines, row);
    std::getline(lines, avg);
    const auto pct_of = [](const std::string& line, int field) {
        std::istringstream ls(line);
        std::string cell;
        for (int f = 0; f <= field; ++f) std::getline(ls, cell, ',');
        return cell;
    };
    CHECK(pct_of(row, 5) == pct_of(avg, 5));  // distance pct column
    CHECK(pct_of(row, 7) == pct_of(avg, 7));  // vehicles pct column
}
