#pragma once

// Ablation experiments: plan with a simplified model, then score that plan
// under the true model and compare against a full-model solve.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fleetopt/core/types.hpp"
#include "fleetopt/core/verify.hpp"
#include "fleetopt/search/evaluate.hpp"
#include "fleetopt/search/search.hpp"
#include "fleetopt/single_ship/solver.hpp"

namespace fleetopt {

enum class AblationKind { weight, price };

inline const char* ablation_name(AblationKind k) { return k == AblationKind::weight ? "weight" : "price"; }

struct AblationEntry {
  std::string label;
  double full_profit = 0.0;
  double ablated_model_profit = 0.0;  // objective the ablated planner believed
  double ablated_profit = 0.0;        // same plan audited under the true model
  double loss = 0.0;                  // 1 - ablated / full
  bool repaired = false;              // speeds had to be raised to restore fuel feasibility
  bool excluded = false;              // no feasible repair exists
  std::string note;
  Assignment full_assignment, ablated_assignment;
  FleetPlan full_plan, ablated_plan;
};

struct AblationSummary {
  std::size_t count = 0;
  std::size_t excluded = 0;
  double mean_loss = 0.0;
  double max_loss = 0.0;
  double min_loss = 0.0;
};

inline AblationSummary summarize(const std::vector<AblationEntry>& entries) {
  AblationSummary s;
  double sum = 0.0;
  bool first = true;
  for (const auto& e : entries) {
    if (e.excluded) {
      ++s.excluded;
      continue;
    }
    ++s.count;
    sum += e.loss;
    s.max_loss = first ? e.loss : std::max(s.max_loss, e.loss);
    s.min_loss = first ? e.loss : std::min(s.min_loss, e.loss);
    first = false;
  }
  if (s.count) s.mean_loss = sum / static_cast<double>(s.count);
  return s;
}

// Every port priced at the unweighted mean of the tier-1 prices, no discounts.
inline Instance uniform_price_instance(const Instance& inst) {
  double mean = 0.0;
  for (const auto& p : inst.ports()) mean += p.prices.base_price();
  mean /= static_cast<double>(inst.port_count());
  auto ports = inst.ports();
  for (auto& p : ports) p.prices = PriceSchedule::flat(mean);
  std::vector<std::vector<double>> dist;
  if (inst.has_explicit_distances()) dist = inst.distance_matrix();
  return Instance(std::move(ports), inst.ships(), inst.cargo_unit_weight(), std::move(dist));
}

namespace ablation_detail {

inline std::vector<double> leg_speeds(const ShipPlan& sp) {
  std::vector<double> v;
  for (const auto& g : sp.legs) v.push_back(g.speed);
  return v;
}

// Re-solves bunkering for a fixed route, speeds and quantities under the
// displacement model. If no bunkering fits, speeds are scaled up by the
// smallest factor (on a 0.1% grid) that admits one.
inline std::optional<ShipPlan> repair_ship(const Instance& inst, std::size_t k, const ShipPlan& sp, bool& repaired) {
  const auto route = sp.customer_sequence();
  std::vector<double> dq, pq;
  for (std::size_t j = 1; j + 1 < sp.visits.size(); ++j) {
    dq.push_back(sp.visits[j].delivery_qty);
    pq.push_back(sp.visits[j].pickup_qty);
  }
  const auto base = leg_speeds(sp);
  const Ship& s = inst.ship(k);
  double top = 1.0;
  for (double v : base) top = std::max(top, s.speed_max / v);
  for (int step = 0;; ++step) {
    const double f = 1.0 + 0.001 * step;
    if (f > top + 1e-12) break;
    std::vector<double> v = base;
    for (auto& x : v) x = std::min(s.speed_max, x * f);
    auto sol = rebunker(inst, k, route, v, dq, pq);
    if (!sol.feasible) continue;
    FleetPlan one;
    one.plans.assign(inst.ship_count(), ShipPlan{});
    one.plans[k] = sol.plan;
    finalize_profits(one, inst);
    if (!evaluate_fleet_plan(inst, one).feasible()) continue;
    repaired = step > 0;
    return sol.plan;
  }
  return std::nullopt;
}

}  // namespace ablation_detail

// Scores `plan` (made by an ablated planner) under the true model of `inst`.
// For the weight ablation bunkering is re-solved; for the price ablation the
// plan is kept as is and only repriced.
inline std::optional<FleetPlan> reaudit(const Instance& inst, const FleetPlan& plan, AblationKind kind, bool& repaired,
                                        std::string& note) {
  FleetPlan out = plan;
  repaired = false;
  if (kind == AblationKind::weight) {
    for (std::size_t k = 0; k < out.plans.size(); ++k) {
      if (out.plans[k].chartered) continue;
      bool r = false;
      auto fixed = ablation_detail::repair_ship(inst, k, out.plans[k], r);
      if (!fixed) {
        note = "ship " + std::to_string(k + 1) + " has no fuel-feasible repair";
        return std::nullopt;
      }
      repaired = repaired || r;
      out.plans[k] = *fixed;
    }
  }
  finalize_profits(out, inst);
  const auto rep = evaluate_fleet_plan(inst, out);
  if (!rep.feasible()) {
    note = rep.violations.front().describe();
    return std::nullopt;
  }
  return out;
}

// One ablation run. The full-model reference is the best of a full-model solve
// from the all-zero assignment, a full-model neighbourhood search started at
// the ablated assignment, and the re-audited ablated plan itself (a feasible
// full-model plan), so the reference is the best full-model plan found.
inline AblationEntry run_ablation(const Instance& inst, AblationKind kind, const SearchOptions& opt,
                                  const std::string& label = {}) {
  AblationEntry e;
  e.label = label;

  SearchOptions abl_opt = opt;
  std::optional<Instance> abl_inst;
  if (kind == AblationKind::weight) {
    abl_opt.solver.weight_model = WeightModel::constant_departure;
  } else {
    abl_inst.emplace(uniform_price_instance(inst));
  }
  const Instance& planning = abl_inst ? *abl_inst : inst;
  const auto abl = solve_fleet(planning, abl_opt);
  e.ablated_assignment = abl.best;
  e.ablated_model_profit = abl.value;

  SearchState st(inst, opt);
  const auto full = solve_fleet(st, Assignment(inst.ship_count(), inst.customer_count()));
  e.full_profit = full.value;
  e.full_plan = full.plan;
  e.full_assignment = full.best;
  const auto warm = neighborhood_search(st, abl.best);
  if (warm.value > e.full_profit) {
    e.full_profit = warm.value;
    e.full_plan = warm.plan;
    e.full_assignment = warm.best;
  }

  bool repaired = false;
  auto audited = reaudit(inst, abl.plan, kind, repaired, e.note);
  if (!audited) {
    e.excluded = true;
    return e;
  }
  e.repaired = repaired;
  e.ablated_plan = *audited;
  e.ablated_profit = audited->total_profit;
  if (e.ablated_profit > e.full_profit) {
    e.full_profit = e.ablated_profit;
    e.full_plan = e.ablated_plan;
    e.full_assignment = plan_assignment(inst, e.ablated_plan);
  }
  e.loss = e.full_profit > 0.0 ? 1.0 - e.ablated_profit / e.full_profit : 0.0;
  return e;
}

}  // namespace fleetopt
