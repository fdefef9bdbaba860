#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstring>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "fleetopt/core/types.hpp"
#include "fleetopt/core/verify.hpp"
#include "fleetopt/single_ship/loading.hpp"
#include "fleetopt/single_ship/solver.hpp"

namespace fleetopt {

inline std::size_t hamming(const Assignment& a, const Assignment& b) {
  if (a.ships() != b.ships() || a.customers() != b.customers())
    throw ValidationError("assignment", "hamming distance needs equal shapes");
  std::size_t d = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w) d += static_cast<std::size_t>(__builtin_popcountll(a.words()[w] ^ b.words()[w]));
  return d;
}

// Memo for single-ship problems. Two tasks share an entry when the ship
// parameters, the port set and the remaining demand at those ports coincide.
class SingleShipCache {
 public:
  explicit SingleShipCache(SolverOptions opt = {}) : opt_(opt) {}

  const SolverOptions& options() const noexcept { return opt_; }

  const SingleShipSolution& solve(const SingleShipTask& task) {
    std::string key = make_key(task);
    auto it = map_.find(key);
    if (it != map_.end()) {
      ++hits_;
      return it->second;
    }
    ++misses_;
    return map_.emplace(std::move(key), solve_single_ship(task, opt_)).first->second;
  }

  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }

 private:
  static void put(std::string& s, double x) {
    char b[sizeof(double)];
    std::memcpy(b, &x, sizeof x);
    s.append(b, sizeof b);
  }
  std::string make_key(const SingleShipTask& t) const {
    const Ship& s = t.inst->ship(t.ship);
    std::string key;
    for (double x : {s.lightweight, s.deadweight, s.fuel_capacity, s.min_bunker_fraction, s.safety_fraction,
                     s.consumption_const, s.cycle_deadline, s.speed_min, s.speed_max})
      put(key, x);
    for (auto p : t.ports) {
      put(key, static_cast<double>(p));
      put(key, t.rem_delivery[p]);
      put(key, t.rem_pickup[p]);
    }
    return key;
  }

  SolverOptions opt_;
  std::unordered_map<std::string, SingleShipSolution> map_;
  std::size_t hits_ = 0, misses_ = 0;
};

struct FleetEvaluation {
  double h = 0.0;
  FleetPlan plan;
};

// Residual demand after the committed ships in `plan` (ships before `upto`).
inline void subtract_service(const ShipPlan& sp, std::vector<double>& rem_d, std::vector<double>& rem_p) {
  if (sp.chartered) return;
  for (const auto& v : sp.visits) {
    rem_d[v.port] = std::max(0.0, rem_d[v.port] - v.delivery_qty);
    rem_p[v.port] = std::max(0.0, rem_p[v.port] - v.pickup_qty);
  }
}

inline void finalize_profits(FleetPlan& plan, const Instance& inst) {
  plan.ship_profits.clear();
  plan.total_profit = 0.0;
  for (std::size_t k = 0; k < plan.plans.size(); ++k) {
    const double p = plan.plans[k].chartered ? inst.ship(k).charter_revenue : ship_serving_profit(inst, plan.plans[k]);
    plan.ship_profits.push_back(p);
    plan.total_profit += p;
  }
}

// Sequential fleet evaluation: ships in index order each serve their assigned
// ports out of the demand the earlier ships left, and charter out whenever
// operating would not beat the charter revenue (or is infeasible).
inline FleetEvaluation evaluate_assignment(const Instance& inst, const Assignment& y, SingleShipCache& cache) {
  FleetEvaluation ev;
  std::vector<double> rem_d, rem_p;
  for (const auto& p : inst.ports()) {
    rem_d.push_back(p.delivery_demand);
    rem_p.push_back(p.pickup_demand);
  }
  ev.plan.plans.resize(inst.ship_count());
  for (std::size_t k = 0; k < inst.ship_count(); ++k) {
    auto ports = y.ports_of(k);
    if (ports.empty()) continue;
    SingleShipTask task{&inst, k, ports, rem_d, rem_p};
    const auto& sol = cache.solve(task);
    if (!sol.feasible || sol.serving_profit <= inst.ship(k).charter_revenue) continue;
    ev.plan.plans[k] = sol.plan;
    subtract_service(sol.plan, rem_d, rem_p);
  }
  finalize_profits(ev.plan, inst);
  ev.h = ev.plan.total_profit;
  return ev;
}

inline FleetEvaluation evaluate_assignment(const Instance& inst, const Assignment& y, const SolverOptions& opt = {}) {
  SingleShipCache cache(opt);
  return evaluate_assignment(inst, y, cache);
}

// Assignment actually realised by a plan: a ship's digits are its visited ports.
inline Assignment plan_assignment(const Instance& inst, const FleetPlan& plan) {
  Assignment a(inst.ship_count(), inst.customer_count());
  for (std::size_t k = 0; k < plan.plans.size(); ++k)
    for (auto p : plan.plans[k].customer_sequence()) a.set(k, p - 1, true);
  return a;
}

}  // namespace fleetopt
