#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fleetopt/core/types.hpp"
#include "fleetopt/core/verify.hpp"
#include "fleetopt/search/evaluate.hpp"
#include "fleetopt/single_ship/solver.hpp"

namespace fleetopt {

struct RefineResult {
  Assignment y;
  FleetPlan plan;
  double h = 0.0;
  bool changed = false;
  std::size_t rounds = 0;
};

inline bool is_noop_visit(const Visit& v) {
  return v.delivery_qty <= 1e-9 && v.pickup_qty <= 1e-9 && !v.bunker_flag && v.bunker_amount <= 1e-9;
}

inline bool has_noop_port(const FleetPlan& plan) {
  for (const auto& sp : plan.plans) {
    if (sp.chartered) continue;
    for (std::size_t j = 1; j + 1 < sp.visits.size(); ++j)
      if (is_noop_visit(sp.visits[j])) return true;
  }
  return false;
}

namespace detail {

// Drops the no-op ports of one ship plan and sails each merged leg in the time
// the removed stretch used to take (never below the minimum speed), holding the
// quantities and re-planning bunkering. The triangle inequality makes the
// merged leg no longer and no hungrier than the stretch it replaces.
inline SingleShipSolution splice_noops(const Instance& inst, std::size_t k, const ShipPlan& sp, const SolverOptions& opt) {
  const Ship& ship = inst.ship(k);
  std::vector<std::size_t> route;
  std::vector<double> speeds, delivery, pickup;
  const auto& v = sp.visits;
  std::size_t last = 0;      // index into visits of the last kept stop
  double elapsed = 0.0;      // sailing + processing time since leaving it
  for (std::size_t j = 0; j + 1 < v.size(); ++j) {
    const double d = inst.distance(v[j].port, v[j + 1].port);
    elapsed += d == 0.0 ? 0.0 : d / sp.legs[j].speed;
    const std::size_t next = j + 1;
    const bool keep = next + 1 == v.size() || !is_noop_visit(v[next]);
    if (!keep) {
      elapsed += inst.port(v[next].port).processing_time;
      continue;
    }
    const double d_merged = inst.distance(v[last].port, v[next].port);
    double speed;
    if (last + 1 == next) speed = sp.legs[j].speed;
    else if (d_merged == 0.0 || elapsed <= 0.0) speed = ship.speed_min;
    else speed = std::clamp(d_merged / elapsed, ship.speed_min, ship.speed_max);
    speeds.push_back(speed);
    if (next + 1 < v.size()) {
      route.push_back(v[next].port);
      delivery.push_back(v[next].delivery_qty);
      pickup.push_back(v[next].pickup_qty);
    }
    last = next;
    elapsed = 0.0;
  }
  if (route.empty()) {
    SingleShipSolution s;
    s.feasible = true;  // nothing left to serve
    return s;
  }
  return rebunker(inst, k, route, speeds, delivery, pickup, opt);
}

inline bool only_profit_issues(const AuditReport& rep) {
  for (const auto& x : rep.violations)
    if (x.kind != ViolationKind::profit_mismatch) return false;
  return true;
}

}  // namespace detail

// Removes ports where a ship neither loads, unloads nor bunkers, until none
// remain. Each round takes the better of (a) a fresh sequential evaluation of
// the reduced assignment and (b) the spliced plan with quantities held.
inline RefineResult refine(const Instance& inst, const FleetPlan& plan, const Assignment& y, SingleShipCache& cache) {
  RefineResult res{y, plan, plan.total_profit, false, 0};
  while (has_noop_port(res.plan)) {
    const RefineResult prev = res;
    ++res.rounds;
    FleetPlan spliced = res.plan;
    for (std::size_t k = 0; k < spliced.plans.size(); ++k) {
      auto& sp = spliced.plans[k];
      if (sp.chartered) continue;
      bool any = false;
      for (std::size_t j = 1; j + 1 < sp.visits.size(); ++j) any = any || is_noop_visit(sp.visits[j]);
      if (!any) continue;
      auto s = detail::splice_noops(inst, k, sp, cache.options());
      if (!s.feasible) {
        spliced.plans.clear();
        break;
      }
      if (s.plan.visits.empty() || s.serving_profit <= inst.ship(k).charter_revenue) sp = ShipPlan{};
      else sp = std::move(s.plan);
    }
    bool spliced_ok = !spliced.plans.empty();
    if (spliced_ok) {
      finalize_profits(spliced, inst);
      spliced_ok = detail::only_profit_issues(evaluate_fleet_plan(inst, spliced));
    }

    FleetPlan reduced_src = res.plan;
    for (auto& sp : reduced_src.plans) {
      if (sp.chartered) continue;
      std::vector<Visit> kept;
      for (std::size_t j = 0; j < sp.visits.size(); ++j)
        if (j == 0 || j + 1 == sp.visits.size() || !is_noop_visit(sp.visits[j])) kept.push_back(sp.visits[j]);
      sp.visits = kept;
    }
    const Assignment y_reduced = plan_assignment(inst, reduced_src);
    auto fresh = evaluate_assignment(inst, y_reduced, cache);

    const double before = res.h;
    if (spliced_ok && spliced.total_profit > fresh.h) {
      res.plan = std::move(spliced);
      res.h = res.plan.total_profit;
    } else {
      res.plan = std::move(fresh.plan);
      res.h = fresh.h;
    }
    if (res.h < before) {
      // Neither candidate beats the current plan; keep it.
      res = prev;
      ++res.rounds;
      return res;
    }
    res.y = plan_assignment(inst, res.plan);
    res.changed = true;
  }
  return res;
}

}  // namespace fleetopt
