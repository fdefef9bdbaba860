// fleetopt command line: solve, search, oracle, ablation, bench, instance
// generation and plan verification.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fleetopt/core/verify.hpp"
#include "fleetopt/harness/ablation.hpp"
#include "fleetopt/harness/bench.hpp"
#include "fleetopt/harness/generator.hpp"
#include "fleetopt/harness/io.hpp"
#include "fleetopt/harness/rounding.hpp"
#include "fleetopt/oracle/oracle.hpp"
#include "fleetopt/search/search.hpp"

namespace fs = std::filesystem;
using namespace fleetopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitValidation = 3;

struct Args {
  std::string mode;
  std::string instance;
  std::string plan;
  std::uint64_t seed = 1;
  std::size_t m = 10;
  std::size_t stagnation = 10;
  double budget_secs = kInf;
  std::string out_dir = ".";
  double oracle_speed_step = 1.0;
  double oracle_qty_step = 0.0;
  std::size_t oracle_max_digits = 10;
  std::size_t oracle_max_ports = 4;
  double oracle_wall_cap = kInf;
  std::size_t count = 0;
  std::size_t ports = 7;
  std::size_t ships = 2;
  std::vector<std::size_t> sizes{5};
  bool no_oracle = false;
  bool integer_quantities = false;
};

class Report {
 public:
  void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, double value) { add(key, format_number(value)); }
  void add_count(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }

  void write(const fs::path& path) const {
    std::ofstream out(path);
    out << "key,value\n";
    for (const auto& [k, v] : rows_) out << k << ',' << v << '\n';
  }
  void print() const {
    for (const auto& [k, v] : rows_) std::cout << k << ": " << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

SearchOptions search_options(const Args& a) {
  SearchOptions o;
  o.m = a.m;
  o.stagnation = a.stagnation;
  o.budget_secs = a.budget_secs;
  o.seed = a.seed;
  return o;
}

OracleConfig oracle_config(const Args& a) {
  OracleConfig c;
  c.speed_step = a.oracle_speed_step;
  c.qty_step_fraction = a.oracle_qty_step;
  c.max_digits = a.oracle_max_digits;
  c.max_ports_per_ship = a.oracle_max_ports;
  c.wall_cap_secs = a.oracle_wall_cap;
  return c;
}

Instance require_instance(const Args& a) {
  if (a.instance.empty()) throw ValidationError("--instance", "required for mode " + a.mode);
  return load_instance(a.instance);
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << text;
  }
  fs::rename(tmp, path);
}

// Audits `plan`, writes plan.txt and fills the common report rows. Returns the exit code.
int emit_plan(const Instance& inst, FleetPlan plan, const Args& a, Report& rep) {
  if (a.integer_quantities) {
    std::size_t kept = 0;
    plan = round_quantities(inst, plan, &kept);
    rep.add_count("ships_left_fractional", kept);
  }
  save_plan((fs::path(a.out_dir) / "plan.txt").string(), plan);
  const auto audit = evaluate_fleet_plan(inst, plan);
  rep.add("profit", plan.total_profit);
  rep.add("audited_profit", audit.profit);
  for (std::size_t k = 0; k < plan.plans.size(); ++k) {
    const auto& sp = plan.plans[k];
    std::string route = "depot";
    for (auto p : sp.customer_sequence()) route += "-" + std::to_string(p + 1);
    rep.add("ship_" + std::to_string(k + 1), sp.chartered ? std::string("chartered") : route + "-depot");
    rep.add("ship_" + std::to_string(k + 1) + "_profit", plan.ship_profits[k]);
  }
  rep.add_count("violations", audit.violations.size());
  for (const auto& v : audit.violations) std::cerr << "violation: " << v.describe() << '\n';
  return audit.feasible() ? kExitOk : kExitInfeasible;
}

int run_search(const Args& a) {
  const Instance inst = require_instance(a);
  const auto opt = search_options(a);
  const Assignment zero(inst.ship_count(), inst.customer_count());
  const auto t0 = std::chrono::steady_clock::now();
  SearchResult res;
  if (a.mode == "ns") res = neighborhood_search(inst, zero, opt);
  else if (a.mode == "mpas") res = mpas_search(inst, zero, opt);
  else res = solve_fleet(inst, opt);
  const double secs = seconds_since(t0);
  Report rep;
  rep.add("mode", a.mode);
  rep.add("seed", std::to_string(a.seed));
  rep.add("assignment", res.best.to_string());
  rep.add("h", res.value);
  rep.add_count("iterations", res.iterations);
  rep.add_count("evaluations", res.evaluations);
  rep.add("budget_exhausted", res.budget_exhausted ? "1" : "0");
  rep.add("verified_local_optimum", res.verified_local_optimum ? "1" : "0");
  rep.add_count("degraded_batches", res.degraded_batches);
  rep.add("wall_secs", secs);
  const int code = emit_plan(inst, res.plan, a, rep);
  {
    std::ofstream tr(fs::path(a.out_dir) / "trace.csv");
    write_trace_csv(tr, res.trace);
  }
  rep.write(fs::path(a.out_dir) / "report.csv");
  rep.print();
  return code;
}

int run_oracle(const Args& a) {
  const Instance inst = require_instance(a);
  const auto res = oracle_solve(inst, oracle_config(a));
  Report rep;
  rep.add("mode", a.mode);
  rep.add("assignment", res.best.to_string());
  rep.add("complete", res.complete ? "1" : "0");
  rep.add_count("assignments_done", res.assignments_done);
  rep.add_count("assignments_total", res.assignments_total);
  rep.add_count("lps_solved", res.lps_solved);
  rep.add("wall_secs", res.wall_secs);
  const int code = emit_plan(inst, res.plan, a, rep);
  {
    std::ofstream tr(fs::path(a.out_dir) / "trace.csv");
    write_trace_csv(tr, {TraceRecord{0, res.best.to_string(), res.profit, res.profit, false, false, res.wall_secs}});
  }
  rep.write(fs::path(a.out_dir) / "report.csv");
  rep.print();
  return code;
}

int run_ablation_mode(const Args& a) {
  const AblationKind kind = a.mode == "ablate-weight" ? AblationKind::weight : AblationKind::price;
  const double anchor = kind == AblationKind::weight ? 0.0871 : 0.0574;
  std::vector<AblationEntry> entries;
  if (!a.instance.empty()) {
    entries.push_back(run_ablation(load_instance(a.instance), kind, search_options(a), a.instance));
  } else {
    const std::size_t count = a.count ? a.count : 100;
    for (std::size_t i = 0; i < count; ++i) {
      Args b = a;
      b.seed = a.seed + i;
      const auto inst = generate_instance(b.seed, a.ports, a.ships);
      entries.push_back(run_ablation(inst, kind, search_options(b), "seed " + std::to_string(b.seed)));
    }
  }
  std::ostringstream csv;
  csv << "instance,full_profit,ablated_model_profit,ablated_profit,loss,repaired,excluded,full_assignment,"
         "ablated_assignment,note\n";
  for (const auto& e : entries) {
    csv << e.label << ',' << format_number(e.full_profit) << ',' << format_number(e.ablated_model_profit) << ','
        << format_number(e.ablated_profit) << ',' << format_number(e.loss) << ',' << (e.repaired ? 1 : 0) << ','
        << (e.excluded ? 1 : 0) << ',' << e.full_assignment.to_string() << ',' << e.ablated_assignment.to_string()
        << ',' << e.note << '\n';
  }
  write_text(fs::path(a.out_dir) / "report.csv", csv.str());
  const auto s = summarize(entries);
  std::cout << "ablation: " << ablation_name(kind) << '\n'
            << "instances: " << s.count << " (excluded " << s.excluded << ")\n"
            << "mean_loss: " << format_number(s.mean_loss) << '\n'
            << "max_loss: " << format_number(s.max_loss) << '\n'
            << "min_loss: " << format_number(s.min_loss) << '\n'
            << "reference mean loss: " << format_number(anchor) << '\n';
  if (entries.size() == 1 && !a.instance.empty()) {
    const auto& e = entries.front();
    std::cout << "full_profit: " << format_number(e.full_profit) << " (" << e.full_assignment.to_string() << ")\n"
              << "ablated_profit: " << format_number(e.ablated_profit) << " (" << e.ablated_assignment.to_string()
              << ")\n";
    if (!e.excluded) save_plan((fs::path(a.out_dir) / "plan.txt").string(), e.ablated_plan);
  }
  return s.count == 0 ? kExitInfeasible : kExitOk;
}

int run_bench_mode(const Args& a) {
  BenchConfig cfg;
  cfg.sizes = a.sizes;
  cfg.ships = a.ships;
  cfg.seeds.clear();
  const std::size_t count = a.count ? a.count : 5;
  for (std::size_t i = 0; i < count; ++i) cfg.seeds.push_back(a.seed + i);
  cfg.search = search_options(a);
  cfg.oracle = oracle_config(a);
  cfg.run_oracle = !a.no_oracle;
  const auto rows = run_bench(cfg, [](const BenchRow& r) {
    std::cout << "N=" << r.n << " K=" << r.k << " seed=" << r.seed << " oracle=" << oracle_status_name(r.oracle_status)
              << " " << format_number(r.oracle_secs) << "s mpas=" << format_number(r.mpas_secs)
              << "s ns=" << format_number(r.ns_secs) << "s\n";
  });
  std::ostringstream csv, sc;
  write_bench_csv(csv, rows);
  write_text(fs::path(a.out_dir) / "report.csv", csv.str());
  write_scaling_csv(sc, scaling_series(rows));
  write_text(fs::path(a.out_dir) / "scaling.csv", sc.str());
  std::cout << sc.str();
  return kExitOk;
}

int run_gen(const Args& a) {
  const std::size_t count = a.count ? a.count : 1;
  if (a.ports < 3) throw ValidationError("--ports", "need at least 3 ports");
  if (a.ships < 1) throw ValidationError("--ships", "need at least 1 ship");
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = a.seed + i;
    const auto inst = generate_instance(seed, a.ports, a.ships);
    const auto path = fs::path(a.out_dir) / ("instance_" + std::to_string(seed) + ".inst");
    save_instance(path.string(), inst);
    std::cout << path.string() << '\n';
  }
  return kExitOk;
}

int run_verify(const Args& a) {
  if (a.plan.empty()) throw ValidationError("--plan", "required for mode verify");
  const Instance inst = require_instance(a);
  const FleetPlan plan = load_plan(a.plan);
  const auto audit = evaluate_fleet_plan(inst, plan);
  std::cout << "stated_profit: " << format_number(plan.total_profit) << '\n'
            << "audited_profit: " << format_number(audit.profit) << '\n'
            << "violations: " << audit.violations.size() << '\n';
  for (const auto& v : audit.violations) std::cout << "  " << v.describe() << '\n';
  std::ostringstream csv;
  csv << "kind,constraint,ship,port,detail\n";
  for (const auto& v : audit.violations)
    csv << violation_name(v.kind) << ',' << violation_constraint(v.kind) << ',' << v.ship + 1 << ',' << v.port + 1 << ','
        << '"' << v.detail << '"' << '\n';
  write_text(fs::path(a.out_dir) / "report.csv", csv.str());
  return audit.feasible() ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fleet deployment and bunkering optimizer"};
  Args a;
  app.add_option("--mode", a.mode, "solve | oracle | ns | mpas | ablate-weight | ablate-price | bench | gen | verify")
      ->required()
      ->check(CLI::IsMember({"solve", "oracle", "ns", "mpas", "ablate-weight", "ablate-price", "bench", "gen", "verify"}));
  app.add_option("--instance", a.instance, "instance file");
  app.add_option("--plan", a.plan, "plan file (verify)");
  app.add_option("--seed", a.seed, "random seed; batch modes use seed, seed+1, ...");
  app.add_option("--m", a.m, "MPAS samples per iteration")->check(CLI::PositiveNumber);
  app.add_option("--stagnation", a.stagnation, "MPAS iterations without improvement before stopping")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget-secs", a.budget_secs, "wall-clock budget per search");
  app.add_option("--out-dir", a.out_dir, "directory for plan.txt, trace.csv, report.csv");
  app.add_option("--oracle-speed-step", a.oracle_speed_step, "oracle speed grid step, knots");
  app.add_option("--oracle-qty-step", a.oracle_qty_step,
                 "oracle quantity grid step as a fraction of demand; 0 solves quantities exactly");
  app.add_option("--oracle-max-digits", a.oracle_max_digits, "oracle cap on K*(N-1)");
  app.add_option("--oracle-max-ports", a.oracle_max_ports, "oracle cap on ports per ship");
  app.add_option("--oracle-wall-cap", a.oracle_wall_cap, "oracle wall-clock cap, seconds (result is then censored)");
  app.add_option("--count", a.count, "instances (gen, ablation batch) or seeds per size (bench)");
  app.add_option("--ports", a.ports, "ports per generated instance, depot included");
  app.add_option("--ships", a.ships, "ships per generated instance");
  app.add_option("--sizes", a.sizes, "bench port counts, e.g. --sizes 5 6 7")->delimiter(',');
  app.add_flag("--no-oracle", a.no_oracle, "bench without the oracle column");
  app.add_flag("--integer-quantities", a.integer_quantities, "round served quantities down to whole TEU in the output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    fs::create_directories(a.out_dir);
    if (a.mode == "solve" || a.mode == "ns" || a.mode == "mpas") return run_search(a);
    if (a.mode == "oracle") return run_oracle(a);
    if (a.mode == "ablate-weight" || a.mode == "ablate-price") return run_ablation_mode(a);
    if (a.mode == "bench") return run_bench_mode(a);
    if (a.mode == "gen") return run_gen(a);
    return run_verify(a);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const OracleCapError& e) {
    std::cerr << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
