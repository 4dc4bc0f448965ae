// Scenario-driven command line front end: generate corpus scenarios, run
// them into reports, bisect a parameter against a target task, and compare
// reports. Exit codes: 0 success, 1 failed checks, 2 malformed input.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "afb/scenario.hpp"

namespace {

afb::ordered_json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) afb::fail("InputError", "cannot open '" + path + "'");
  try {
    return afb::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    afb::fail("SchemaError", std::string(e.what()) + " in '" + path + "'");
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) afb::fail("InputError", "cannot write '" + path + "'");
  out << text;
}

std::string render(const afb::ordered_json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  if (format == "text") return afb::render_text(report);
  afb::fail("InputError", "unknown format '" + format + "'");
}

std::map<std::string, double> parse_tolerances(
    const std::vector<std::string>& kvs) {
  std::map<std::string, double> out;
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      afb::fail("InputError", "tolerance must be KEY=VALUE, got '" + kv + "'");
    try {
      out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      afb::fail("InputError", "bad tolerance value in '" + kv + "'");
    }
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"almost-flat bundles: scenario runner and index checks"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "write a corpus scenario file");
  std::string gen_corpus;
  std::string gen_epsilon, gen_seed, gen_fiber, gen_datum, gen_rep, gen_level,
      gen_profile;
  std::string gen_output;
  gen->add_option("corpus", gen_corpus,
                  "circle | triangle | wedge | sphere | torus | rp2")
      ->required();
  gen->add_option("--epsilon", gen_epsilon, "flatness defect target");
  gen->add_option("--seed", gen_seed, "PRNG seed");
  gen->add_option("--fiber", gen_fiber, "fiber as d0,d1,m");
  gen->add_option("--datum", gen_datum, "symmetry | kernel | zero | none");
  gen->add_option("--rep", gen_rep, "bundle recipe: random | trivial | sign");
  gen->add_option("--level", gen_level, "sample subdivision level");
  gen->add_option("--profile", gen_profile, "full | gate-sweep");
  gen->add_option("--output,-o", gen_output, "output path (default corpus dir)");

  auto* check = app.add_subcommand("check", "run a scenario into a report");
  std::string check_path, check_output, check_format = "json";
  std::vector<std::string> check_tols;
  uint64_t check_seed = 0;
  bool check_seed_set = false, check_timings = false;
  int check_jobs = 1;
  check->add_option("scenario", check_path, "scenario JSON file")->required();
  check->add_option("--seed", check_seed, "override the scenario seed")
      ->each([&check_seed_set](const std::string&) { check_seed_set = true; });
  check->add_option("--tolerance", check_tols, "override KEY=VALUE, repeatable");
  check->add_option("--jobs", check_jobs, "run tasks on this many threads")
      ->check(CLI::PositiveNumber);
  check->add_option("--output,-o", check_output, "report path (default stdout)");
  check->add_option("--format", check_format, "json | text");
  check->add_flag("--timings", check_timings, "include wall-clock fields");

  auto* sweep = app.add_subcommand("sweep", "bisect a parameter to a threshold");
  std::string sweep_path, sweep_param = "/bundle/epsilon", sweep_target;
  std::string sweep_output, sweep_format = "json";
  std::vector<std::string> sweep_tols;
  double sweep_lo = 0.0, sweep_hi = 0.0;
  int sweep_steps = 12;
  sweep->add_option("scenario", sweep_path, "scenario JSON file")->required();
  sweep->add_option("--param", sweep_param, "JSON pointer to the swept value");
  sweep->add_option("--lo", sweep_lo, "low end (expected pass)")->required();
  sweep->add_option("--hi", sweep_hi, "high end (expected fail)")->required();
  sweep->add_option("--target", sweep_target, "task name or check to watch")
      ->required();
  sweep->add_option("--steps", sweep_steps, "bisection steps")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--tolerance", sweep_tols, "override KEY=VALUE, repeatable");
  sweep->add_option("--output,-o", sweep_output, "report path (default stdout)");
  sweep->add_option("--format", sweep_format, "json | text");

  auto* rdiff = app.add_subcommand("report-diff",
                                   "compare two reports, ignoring timings");
  std::string diff_a, diff_b;
  rdiff->add_option("first", diff_a, "first report")->required();
  rdiff->add_option("second", diff_b, "second report")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      std::map<std::string, std::string> params;
      if (!gen_epsilon.empty()) params["epsilon"] = gen_epsilon;
      if (!gen_seed.empty()) params["seed"] = gen_seed;
      if (!gen_fiber.empty()) params["fiber"] = gen_fiber;
      if (!gen_datum.empty()) params["datum"] = gen_datum;
      if (!gen_rep.empty()) params["rep"] = gen_rep;
      if (!gen_level.empty()) params["level"] = gen_level;
      if (!gen_profile.empty()) params["profile"] = gen_profile;
      const afb::ordered_json s = afb::generate_scenario(gen_corpus, params);
      std::string path = gen_output;
      if (path.empty()) {
        const char* dir = std::getenv("AFB_CORPUS_DIR");
        path = std::string(dir && *dir ? dir : ".") + "/" +
               s.at("name").get<std::string>() + ".json";
      }
      write_text(path, s.dump(2) + "\n");
      if (path != "-") std::cout << path << "\n";
      return 0;
    }
    if (*check) {
      afb::ordered_json scenario = load_json(check_path);
      if (check_seed_set) scenario["seed"] = check_seed;
      afb::RunOptions opts;
      opts.tolerances = parse_tolerances(check_tols);
      opts.jobs = check_jobs;
      opts.timings = check_timings;
      const afb::ordered_json report = afb::run_scenario(scenario, opts);
      write_text(check_output, render(report, check_format));
      return report.at("verdict").get<std::string>() == "pass" ? 0 : 1;
    }
    if (*sweep) {
      const afb::ordered_json scenario = load_json(sweep_path);
      afb::RunOptions opts;
      opts.tolerances = parse_tolerances(sweep_tols);
      const afb::ordered_json report = afb::run_sweep(
          scenario, sweep_param, sweep_lo, sweep_hi, sweep_target, sweep_steps,
          opts);
      write_text(sweep_output, render(report, sweep_format));
      return report.at("verdict").get<std::string>() == "pass" ? 0 : 1;
    }
    if (*rdiff) {
      const afb::ordered_json a = load_json(diff_a);
      const afb::ordered_json b = load_json(diff_b);
      return afb::report_diff(a, b, std::cout) ? 0 : 1;
    }
  } catch (const afb::AfbError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
