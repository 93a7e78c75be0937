// mgform: run the three restoration cases on a scenario, generate random
// scenarios, or check inference against the brute-force oracle.
//
// Exit codes: 2 schema/validation/usage error, 1 infeasible plan, search budget
// exceeded or too many unknowns, 0 otherwise.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mgform/errors.hpp"
#include "mgform/ieee37.hpp"
#include "mgform/netmodel.hpp"
#include "mgform/report.hpp"
#include "mgform/scenario_gen.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadInput = 2;

struct Output {
  std::string text;
  std::string error;
  int code = kOk;
};

mgform::Scenario read_scenario(const std::string& path) {
  if (path.empty() || path == "default") return mgform::builtin_ieee37();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mgform::SchemaError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return mgform::load_scenario(buf.str());
}

int classify(const std::exception& e) {
  if (dynamic_cast<const mgform::SchemaError*>(&e) || dynamic_cast<const mgform::ValidationError*>(&e))
    return kBadInput;
  return kFailed;
}

Output run_one(const std::string& path, const mgform::RunOptions& opt, bool structured, bool timings) {
  Output o;
  try {
    const auto s = read_scenario(path);
    const auto r = mgform::run_pipeline(s, opt);
    o.text = structured ? mgform::report_text(s, r, opt, timings) : mgform::report_table(s, r, timings);
    if (r.infeasible()) {
      o.code = kFailed;
      o.error = "scf: no feasible restoration plan";
    }
  } catch (const std::exception& e) {
    o.code = classify(e);
    o.error = e.what();
  }
  return o;
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return kOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "mgform: cannot write " << out_path << "\n";
    return kBadInput;
  }
  out << text;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Microgrid formation under partial FTU observability"};
  app.require_subcommand(1);

  std::string format = "table";
  std::string out_path;

  auto* run = app.add_subcommand("run", "infer unknown states and compare the three restoration cases");
  std::vector<std::string> run_paths;
  bool no_probes = false, timings = false;
  unsigned jobs = 1;
  std::uint64_t budget = mgform::ScfOptions{}.node_budget;
  run->add_option("scenario", run_paths, "scenario file(s); 'default' or none for the built-in 37-node case");
  run->add_flag("--no-probes", no_probes, "skip disturbance probes");
  run->add_option("--format", format, "table or structured")->check(CLI::IsMember({"table", "structured"}));
  run->add_option("--out", out_path, "write the report here instead of stdout");
  run->add_option("--jobs", jobs, "scenarios processed in parallel")->check(CLI::Range(1u, 64u));
  run->add_option("--node-budget", budget, "branch-and-bound node cap")->check(CLI::PositiveNumber);
  run->add_flag("--timings", timings, "include wall-clock timings (not byte-stable)");

  auto* gen = app.add_subcommand("gen", "write a random scenario");
  mgform::GenOptions gopt;
  gen->add_option("--seed", gopt.seed, "random seed");
  gen->add_option("--buses", gopt.buses, "bus count (10-60)");
  gen->add_option("--dgs", gopt.dgs, "DG count (1-4)");
  gen->add_option("--outage", gopt.outage_rate, "FTU outage probability; drawn per scenario if omitted");
  gen->add_option("--out", out_path, "output file instead of stdout");

  auto* oracle = app.add_subcommand("oracle", "compare inference with exhaustive enumeration");
  std::string oracle_path;
  oracle->add_option("scenario", oracle_path, "scenario file; 'default' or none for the built-in case");
  oracle->add_option("--format", format, "table or structured")->check(CLI::IsMember({"table", "structured"}));
  oracle->add_option("--out", out_path, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  if (*gen) {
    try {
      return emit(mgform::serialize(mgform::generate_scenario(gopt)), out_path);
    } catch (const std::exception& e) {
      std::cerr << "mgform gen: " << e.what() << "\n";
      return kBadInput;
    }
  }

  if (*oracle) {
    try {
      const auto s = read_scenario(oracle_path);
      const auto o = mgform::run_oracle(s);
      const auto text = format == "structured" ? mgform::oracle_json(s, o).dump(2) + "\n" : mgform::oracle_table(o);
      return emit(text, out_path);
    } catch (const std::exception& e) {
      std::cerr << "mgform oracle: " << e.what() << "\n";
      return classify(e);
    }
  }

  mgform::RunOptions opt;
  opt.probes = !no_probes;
  opt.scf.node_budget = budget;
  if (run_paths.empty()) run_paths.push_back("default");
  const bool structured = format == "structured";

  std::vector<Output> results(run_paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < run_paths.size();) results[i] = run_one(run_paths[i], opt, structured, timings);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::min<std::size_t>(jobs, run_paths.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kOk;
  std::string text;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (!r.error.empty()) std::cerr << "mgform run " << run_paths[i] << ": " << r.error << "\n";
    code = std::max(code, r.code);
    if (r.text.empty()) continue;
    if (structured && results.size() > 1) {
      text += (text.empty() ? "[\n" : ",\n") + r.text.substr(0, r.text.size() - 1);
    } else {
      if (results.size() > 1) text += "== " + run_paths[i] + "\n";
      text += r.text;
      if (results.size() > 1 && i + 1 < results.size()) text += "\n";
    }
  }
  if (structured && results.size() > 1 && !text.empty()) text += "\n]\n";
  if (const int w = emit(text, out_path); w != kOk) return w;
  return code;
}
