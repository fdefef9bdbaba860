#pragma once

// Runtime and quality comparison of the oracle, MPAS and neighbourhood search
// on generated instances.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "fleetopt/harness/generator.hpp"
#include "fleetopt/harness/io.hpp"
#include "fleetopt/oracle/oracle.hpp"
#include "fleetopt/search/search.hpp"

namespace fleetopt {

struct BenchConfig {
  std::vector<std::size_t> sizes{5};  // N, depot included
  std::size_t ships = 2;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  SearchOptions search;
  OracleConfig oracle;
  bool run_oracle = true;
  GeneratorConfig generator;
};

enum class OracleStatus { full, censored, absent };

inline const char* oracle_status_name(OracleStatus s) {
  switch (s) {
    case OracleStatus::full: return "full";
    case OracleStatus::censored: return "censored";
    default: return "absent";
  }
}

struct BenchRow {
  std::size_t n = 0, k = 0;
  std::uint64_t seed = 0;
  OracleStatus oracle_status = OracleStatus::absent;
  double oracle_secs = 0.0, oracle_profit = 0.0;
  double mpas_secs = 0.0, mpas_profit = 0.0;
  double ns_secs = 0.0, ns_profit = 0.0;
  std::size_t mpas_evaluations = 0, ns_evaluations = 0;
  std::string note;

  bool has_gap() const { return oracle_status == OracleStatus::full && oracle_profit > 0.0; }
};

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline BenchRow bench_instance(const Instance& inst, std::uint64_t seed, const BenchConfig& cfg) {
  BenchRow row;
  row.n = inst.port_count();
  row.k = inst.ship_count();
  row.seed = seed;
  SearchOptions so = cfg.search;
  so.seed = seed;
  const Assignment zero(inst.ship_count(), inst.customer_count());

  auto t0 = std::chrono::steady_clock::now();
  auto mp = mpas_search(inst, zero, so);
  row.mpas_secs = seconds_since(t0);
  row.mpas_profit = mp.value;
  row.mpas_evaluations = mp.evaluations;

  t0 = std::chrono::steady_clock::now();
  auto ns = neighborhood_search(inst, zero, so);
  row.ns_secs = seconds_since(t0);
  row.ns_profit = ns.value;
  row.ns_evaluations = ns.evaluations;

  if (cfg.run_oracle) {
    try {
      auto orc = oracle_solve(inst, cfg.oracle);
      row.oracle_secs = orc.wall_secs;
      row.oracle_profit = orc.profit;
      row.oracle_status = orc.complete ? OracleStatus::full : OracleStatus::censored;
    } catch (const OracleCapError& e) {
      row.note = e.what();
    }
  }
  return row;
}

inline std::vector<BenchRow> run_bench(const BenchConfig& cfg,
                                       const std::function<void(const BenchRow&)>& on_row = {}) {
  std::vector<BenchRow> rows;
  for (auto n : cfg.sizes)
    for (auto seed : cfg.seeds) {
      const auto inst = generate_instance(seed, n, cfg.ships, cfg.generator);
      rows.push_back(bench_instance(inst, seed, cfg));
      if (on_row) on_row(rows.back());
    }
  return rows;
}

inline void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "N,K,seed,oracle_status,oracle_secs,oracle_profit,mpas_secs,mpas_profit,mpas_gap,ns_secs,ns_profit,ns_gap,"
        "mpas_evaluations,ns_evaluations\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.k << ',' << r.seed << ',' << oracle_status_name(r.oracle_status) << ',';
    if (r.oracle_status == OracleStatus::absent) os << ",,";
    else os << format_number(r.oracle_secs) << ',' << format_number(r.oracle_profit) << ',';
    os << format_number(r.mpas_secs) << ',' << format_number(r.mpas_profit) << ',';
    if (r.has_gap()) os << format_number(gap(r.mpas_profit, r.oracle_profit).gap);
    os << ',' << format_number(r.ns_secs) << ',' << format_number(r.ns_profit) << ',';
    if (r.has_gap()) os << format_number(gap(r.ns_profit, r.oracle_profit).gap);
    os << ',' << r.mpas_evaluations << ',' << r.ns_evaluations << '\n';
  }
}

// Per-N timing summary. Censored oracle times are lower bounds.
struct ScalingPoint {
  std::size_t n = 0;
  std::size_t runs = 0;
  std::size_t oracle_runs = 0, oracle_censored = 0;
  double oracle_mean = 0.0, oracle_median = 0.0;
  double mpas_mean = 0.0, mpas_median = 0.0;
  double ns_mean = 0.0, ns_median = 0.0;
};

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline std::vector<ScalingPoint> scaling_series(const std::vector<BenchRow>& rows) {
  std::map<std::size_t, std::vector<const BenchRow*>> by_n;
  for (const auto& r : rows) by_n[r.n].push_back(&r);
  std::vector<ScalingPoint> out;
  for (const auto& [n, rs] : by_n) {
    ScalingPoint p;
    p.n = n;
    p.runs = rs.size();
    std::vector<double> o, m, s;
    for (const auto* r : rs) {
      m.push_back(r->mpas_secs);
      s.push_back(r->ns_secs);
      if (r->oracle_status != OracleStatus::absent) {
        o.push_back(r->oracle_secs);
        if (r->oracle_status == OracleStatus::censored) ++p.oracle_censored;
      }
    }
    p.oracle_runs = o.size();
    p.oracle_mean = mean(o);
    p.oracle_median = median(o);
    p.mpas_mean = mean(m);
    p.mpas_median = median(m);
    p.ns_mean = mean(s);
    p.ns_median = median(s);
    out.push_back(p);
  }
  return out;
}

inline void write_scaling_csv(std::ostream& os, const std::vector<ScalingPoint>& pts) {
  os << "N,runs,oracle_runs,oracle_censored,oracle_mean_secs,oracle_median_secs,mpas_mean_secs,mpas_median_secs,"
        "ns_mean_secs,ns_median_secs\n";
  for (const auto& p : pts)
    os << p.n << ',' << p.runs << ',' << p.oracle_runs << ',' << p.oracle_censored << ',' << format_number(p.oracle_mean)
       << ',' << format_number(p.oracle_median) << ',' << format_number(p.mpas_mean) << ','
       << format_number(p.mpas_median) << ',' << format_number(p.ns_mean) << ',' << format_number(p.ns_median) << '\n';
}

// Least-squares slope of log(time) against N; a rough growth rate.
inline double log_time_slope(const std::vector<ScalingPoint>& pts, double ScalingPoint::*field) {
  std::vector<double> xs, ys;
  for (const auto& p : pts)
    if (p.*field > 0.0) {
      xs.push_back(static_cast<double>(p.n));
      ys.push_back(std::log(p.*field));
    }
  if (xs.size() < 2) return 0.0;
  const double mx = mean(xs), my = mean(ys);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace fleetopt
