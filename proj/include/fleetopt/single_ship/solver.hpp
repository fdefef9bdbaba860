#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fleetopt/core/fuel.hpp"
#include "fleetopt/core/types.hpp"
#include "fleetopt/core/verify.hpp"
#include "fleetopt/single_ship/loading.hpp"
#include "fleetopt/single_ship/speeds.hpp"

namespace fleetopt {

struct SolverOptions {
  std::size_t max_ports = 9;      // larger port sets are reported infeasible
  std::size_t max_rounds = 50;
  double rel_tol = 1e-6;
  WeightModel weight_model = WeightModel::displacement;
  std::size_t max_exact_bunker_stops = 13;
};

// One ship serving a fixed port set out of the demand still unserved.
struct SingleShipTask {
  const Instance* inst = nullptr;
  std::size_t ship = 0;
  std::vector<std::size_t> ports;       // 0-based customer port indices
  std::vector<double> rem_delivery;     // per port index (size N)
  std::vector<double> rem_pickup;
};

struct SingleShipDiagnostics {
  std::size_t routes_enumerated = 0;
  std::size_t routes_optimized = 0;
  std::size_t routes_pruned = 0;
  std::size_t inner_rounds = 0;
  std::size_t lps_solved = 0;
};

struct SingleShipSolution {
  bool feasible = false;
  ShipPlan plan;
  double serving_profit = 0.0;  // revenue minus bunker cost, charter not included
  SingleShipDiagnostics diag;
  std::string reason;           // set when infeasible
};

struct InnerResult {
  bool feasible = false;
  ShipPlan plan;
  double serving_profit = -kInf;
  std::size_t rounds = 0;
  std::size_t lps_solved = 0;
  std::vector<double> profit_trace;  // accepted profit after each round
};

namespace detail {

inline double arrival_upper(const Instance& inst, std::size_t port, bool depot, const Ship& ship) {
  return depot ? ship.cycle_deadline : inst.port(port).window_close;
}

// Sound prefix test: even at top speed the prefix misses a deadline, or a leg
// burns more than a full usable tank at the lowest speed with an empty ship.
inline bool leg_fuel_possible(const Instance& inst, const Ship& ship, std::size_t a, std::size_t b) {
  const double d = inst.distance(a, b);
  const double burn = d * ship.consumption_const * ship.lightweight * ship.speed_min * ship.speed_min;
  return burn <= ship.fuel_capacity - ship.safety_level() + kFeasTol;
}

}  // namespace detail

// Visits every ordering of `ports` that could meet the deadlines at top speed,
// in lexicographic order. Returns the number of complete routes emitted.
inline std::size_t enumerate_routes(const Instance& inst, std::size_t ship_index, std::vector<std::size_t> ports,
                                    const std::function<void(const std::vector<std::size_t>&)>& emit) {
  const Ship& ship = inst.ship(ship_index);
  std::sort(ports.begin(), ports.end());
  const std::size_t n = ports.size();
  std::vector<std::size_t> seq;
  std::vector<bool> used(n, false);
  std::size_t count = 0;
  std::function<void(std::size_t, double)> dfs = [&](std::size_t last, double t_depart) {
    if (seq.size() == n) {
      const double back = t_depart + inst.distance(last, 0) / ship.speed_max;
      if (back > ship.cycle_deadline + kFeasTol) return;
      if (!detail::leg_fuel_possible(inst, ship, last, 0)) return;
      ++count;
      emit(seq);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      const std::size_t p = ports[i];
      const Port& port = inst.port(p);
      const double arrive = t_depart + inst.distance(last, p) / ship.speed_max;
      if (arrive > port.window_close + kFeasTol) continue;
      const double leave = std::max(arrive, port.window_open) + port.processing_time;
      if (leave + inst.distance(p, 0) / ship.speed_max > ship.cycle_deadline + kFeasTol) continue;
      if (!detail::leg_fuel_possible(inst, ship, last, p)) continue;
      used[i] = true;
      seq.push_back(p);
      dfs(p, leave);
      seq.pop_back();
      used[i] = false;
    }
  };
  if (n == 0) return 0;
  dfs(0, inst.port(0).processing_time);
  return count;
}

inline std::vector<std::vector<std::size_t>> enumerate_routes(const Instance& inst, std::size_t ship_index,
                                                              std::vector<std::size_t> ports) {
  std::vector<std::vector<std::size_t>> out;
  enumerate_routes(inst, ship_index, std::move(ports), [&](const std::vector<std::size_t>& s) { out.push_back(s); });
  return out;
}

namespace detail {

inline SpeedProblem speed_problem_for(const Instance& inst, std::size_t ship_index, const std::vector<std::size_t>& route,
                                      const std::vector<double>& leg_weight) {
  const Ship& ship = inst.ship(ship_index);
  SpeedProblem sp;
  sp.consumption_const = ship.consumption_const;
  sp.speed_min = ship.speed_min;
  sp.speed_max = ship.speed_max;
  std::size_t prev = 0;
  for (std::size_t j = 0; j <= route.size(); ++j) {
    const std::size_t next = j < route.size() ? route[j] : 0;
    sp.distance.push_back(inst.distance(prev, next));
    sp.weight.push_back(leg_weight[j]);
    sp.fuel_value.push_back(1.0);
    sp.processing.push_back(inst.port(prev).processing_time);
    if (j < route.size()) {
      sp.window_open.push_back(inst.port(next).window_open);
      sp.window_close.push_back(inst.port(next).window_close);
    } else {
      sp.window_open.push_back(0.0);
      sp.window_close.push_back(ship.cycle_deadline);
    }
    prev = next;
  }
  return sp;
}

// Weight each leg is charged for under the chosen weight model.
inline std::vector<double> leg_weights(const Instance& inst, const Ship& ship, const std::vector<double>& delivery,
                                       const std::vector<double>& pickup, WeightModel model) {
  const double w = inst.cargo_unit_weight();
  double total_delivery = 0.0;
  for (double q : delivery) total_delivery += q;
  std::vector<double> weights;
  double wt = ship.lightweight + w * total_delivery;
  weights.push_back(wt);
  for (std::size_t i = 0; i < delivery.size(); ++i) {
    wt += w * (pickup[i] - delivery[i]);
    weights.push_back(model == WeightModel::constant_departure ? weights.front() : wt);
  }
  return weights;
}

}  // namespace detail

// Assembles the plan record for a route with chosen speeds and loading.
inline ShipPlan build_plan(const Instance& inst, std::size_t ship_index, const std::vector<std::size_t>& route,
                           const std::vector<double>& speeds, const LoadResult& load,
                           WeightModel model = WeightModel::displacement) {
  ShipPlan plan;
  plan.chartered = false;
  Visit depot;
  depot.port = 0;
  depot.fuel_on_entry = load.initial_fuel;
  depot.bunker_amount = load.bunker[0];
  depot.bunker_flag = load.bunker[0] > 0.0;
  plan.visits.push_back(depot);
  for (std::size_t i = 0; i < route.size(); ++i) {
    Visit v;
    v.port = route[i];
    v.delivery_qty = load.delivery[i];
    v.pickup_qty = load.pickup[i];
    v.bunker_amount = load.bunker[i + 1];
    v.bunker_flag = v.bunker_amount > 0.0;
    plan.visits.push_back(v);
  }
  Visit ret;
  ret.port = 0;
  plan.visits.push_back(ret);
  for (std::size_t j = 0; j + 1 < plan.visits.size(); ++j)
    plan.legs.push_back({plan.visits[j].port, plan.visits[j + 1].port, speeds[j]});
  derive_states(inst, ship_index, plan, model);
  return plan;
}

namespace detail {

inline bool arrivals_ok(const Instance& inst, const Ship& ship, const std::vector<std::size_t>& route,
                        const std::vector<double>& speeds) {
  double t = 0.0;
  std::size_t prev = 0;
  for (std::size_t j = 0; j <= route.size(); ++j) {
    const std::size_t next = j < route.size() ? route[j] : 0;
    const double d = inst.distance(prev, next);
    t += inst.port(prev).processing_time + (d == 0.0 ? 0.0 : d / speeds[j]);
    if (j < route.size()) {
      if (t < inst.port(next).window_open - kFeasTol || t > inst.port(next).window_close + kFeasTol) return false;
    } else if (t > ship.cycle_deadline + kFeasTol) {
      return false;
    }
    prev = next;
  }
  return true;
}

// Upper bound on each leg's displacement when every remaining demand is carried.
inline std::vector<double> heaviest_legs(const Instance& inst, const Ship& ship, const std::vector<double>& delivery_cap,
                                         const std::vector<double>& pickup_cap) {
  const std::size_t n = delivery_cap.size();
  std::vector<double> out(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    double cargo = 0.0;
    for (std::size_t i = 0; i < n; ++i) cargo += i >= j ? delivery_cap[i] : pickup_cap[i];
    out[j] = std::min(ship.deadweight, ship.lightweight + inst.cargo_unit_weight() * cargo);
  }
  return out;
}

}  // namespace detail

// Scales speeds up (capped at the maximum) until the cycle burn with the
// heaviest possible load reaches the minimum purchase. False if impossible.
inline bool lift_speeds(const Instance& inst, std::size_t ship_index, const std::vector<std::size_t>& route,
                        const std::vector<double>& delivery_cap, const std::vector<double>& pickup_cap,
                        std::vector<double>& speeds) {
  const Ship& ship = inst.ship(ship_index);
  const auto heaviest = detail::heaviest_legs(inst, ship, delivery_cap, pickup_cap);
  std::vector<double> dist;
  std::size_t prev = 0;
  for (std::size_t j = 0; j <= route.size(); ++j) {
    const std::size_t next = j < route.size() ? route[j] : 0;
    dist.push_back(inst.distance(prev, next));
    prev = next;
  }
  auto burn = [&](const std::vector<double>& v) {
    double b = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) b += dist[j] * ship.consumption_const * heaviest[j] * v[j] * v[j];
    return b;
  };
  std::vector<double> v = speeds;
  const double target = ship.min_bunker() * (1.0 + 1e-9);
  for (int it = 0; it < 64 && burn(v) < target; ++it) {
    double fixed = 0.0, scalable = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double b = dist[j] * ship.consumption_const * heaviest[j] * v[j] * v[j];
      if (v[j] >= ship.speed_max) fixed += b; else scalable += b;
    }
    if (scalable <= 0.0) return false;
    const double alpha = std::sqrt(std::max(1.0, (target - fixed) / scalable));
    for (auto& x : v) x = std::min(ship.speed_max, x * alpha);
  }
  if (burn(v) < target || !detail::arrivals_ok(inst, ship, route, v)) return false;
  speeds = v;
  return true;
}

// Alternates between the speed problem (loading fixed) and the loading problem
// (speeds fixed) until profit stops improving.
inline InnerResult inner_optimize(const Instance& inst, std::size_t ship_index, const std::vector<std::size_t>& route,
                                  const std::vector<double>& delivery_cap, const std::vector<double>& pickup_cap,
                                  const SolverOptions& opt = {}) {
  InnerResult res;
  const Ship& ship = inst.ship(ship_index);
  const std::size_t n = route.size();
  std::vector<double> q0(n, 0.0);
  auto weights = detail::leg_weights(inst, ship, q0, q0, opt.weight_model);
  auto sp = optimize_speeds(detail::speed_problem_for(inst, ship_index, route, weights));
  if (!sp.feasible) return res;

  LoadProblem lp;
  lp.inst = &inst;
  lp.ship = ship_index;
  lp.route = route;
  lp.delivery_cap = delivery_cap;
  lp.pickup_cap = pickup_cap;
  lp.weight_model = opt.weight_model;
  lp.max_exact_stops = opt.max_exact_bunker_stops;

  std::vector<double> speeds = sp.speeds;
  bool lifted = false;
  LoadResult best_load;
  std::vector<double> best_speeds;
  for (std::size_t round = 0; round < opt.max_rounds; ++round) {
    lp.speeds = speeds;
    auto load = optimize_quantities_and_bunkering(lp);
    res.lps_solved += load.lps_solved;
    ++res.rounds;
    if (!load.feasible && !res.feasible && !lifted) {
      // A cycle that burns less than one minimum purchase cannot close its fuel
      // balance. Sail uniformly faster until even a fully laden ship would.
      lifted = true;
      if (lift_speeds(inst, ship_index, route, delivery_cap, pickup_cap, speeds)) {
        --round;
        continue;
      }
    }
    if (!load.feasible) break;
    const bool first = !res.feasible;
    if (!first && load.profit <= res.serving_profit) break;  // a losing round is discarded
    const double gain = first ? kInf : load.profit - res.serving_profit;
    res.feasible = true;
    res.serving_profit = load.profit;
    res.profit_trace.push_back(load.profit);
    best_load = load;
    best_speeds = speeds;
    if (!first && gain < opt.rel_tol * std::max(1.0, std::fabs(load.profit))) break;

    weights = detail::leg_weights(inst, ship, load.delivery, load.pickup, opt.weight_model);
    auto next = optimize_speeds(detail::speed_problem_for(inst, ship_index, route, weights));
    if (!next.feasible) break;
    double change = 0.0;
    for (std::size_t j = 0; j < speeds.size(); ++j)
      change = std::max(change, std::fabs(next.speeds[j] - speeds[j]) / speeds[j]);
    if (change < 1e-9) break;
    speeds = next.speeds;
  }
  if (res.feasible) res.plan = build_plan(inst, ship_index, route, best_speeds, best_load, opt.weight_model);
  return res;
}

// Best single-ship plan over every ordering of the port set. Ties keep the
// lexicographically smallest ordering.
inline SingleShipSolution solve_single_ship(const SingleShipTask& task, const SolverOptions& opt = {}) {
  SingleShipSolution sol;
  const Instance& inst = *task.inst;
  const Ship& ship = inst.ship(task.ship);
  if (task.ports.empty()) {
    sol.feasible = true;
    return sol;
  }
  if (task.ports.size() > opt.max_ports) {
    sol.reason = "port set larger than " + std::to_string(opt.max_ports);
    return sol;
  }
  // Fuel lower bound for a route: empty ship at minimum speed, cheapest price on route.
  double cheapest = inst.port(0).prices.cheapest_price();
  for (auto p : task.ports) cheapest = std::min(cheapest, inst.port(p).prices.cheapest_price());
  double revenue_bound = 0.0;
  for (auto p : task.ports) {
    const Port& port = inst.port(p);
    revenue_bound += port.delivery_revenue * task.rem_delivery[p] + port.pickup_revenue * task.rem_pickup[p];
  }
  const double k_min = cheapest * ship.consumption_const * ship.lightweight * ship.speed_min * ship.speed_min;

  double best = -kInf;
  sol.diag.routes_enumerated = enumerate_routes(inst, task.ship, task.ports, [&](const std::vector<std::size_t>& route) {
    double length = inst.distance(0, route.front()) + inst.distance(route.back(), 0);
    for (std::size_t i = 0; i + 1 < route.size(); ++i) length += inst.distance(route[i], route[i + 1]);
    if (sol.feasible && revenue_bound - k_min * length <= best) {
      ++sol.diag.routes_pruned;
      return;
    }
    std::vector<double> dcap, pcap;
    for (auto p : route) {
      dcap.push_back(task.rem_delivery[p]);
      pcap.push_back(task.rem_pickup[p]);
    }
    auto r = inner_optimize(inst, task.ship, route, dcap, pcap, opt);
    ++sol.diag.routes_optimized;
    sol.diag.inner_rounds += r.rounds;
    sol.diag.lps_solved += r.lps_solved;
    if (r.feasible && (!sol.feasible || r.serving_profit > best + 1e-9 * std::max(1.0, std::fabs(best)))) {
      best = r.serving_profit;
      sol.feasible = true;
      sol.plan = std::move(r.plan);
      sol.serving_profit = r.serving_profit;
    }
  });
  if (!sol.feasible) sol.reason = sol.diag.routes_enumerated == 0 ? "no ordering meets the deadlines" : "no fuel-feasible plan";
  return sol;
}

}  // namespace fleetopt

namespace fleetopt {

// Re-plans bunkering for a plan whose route, speeds and quantities are kept.
// Returns the rebuilt plan, or an infeasible solution if no bunkering pattern works.
inline SingleShipSolution rebunker(const Instance& inst, std::size_t ship_index, const std::vector<std::size_t>& route,
                                   const std::vector<double>& speeds, const std::vector<double>& delivery,
                                   const std::vector<double>& pickup, const SolverOptions& opt = {}) {
  SingleShipSolution sol;
  LoadProblem lp;
  lp.inst = &inst;
  lp.ship = ship_index;
  lp.route = route;
  lp.speeds = speeds;
  lp.delivery_cap = delivery;
  lp.pickup_cap = pickup;
  lp.fixed_delivery = delivery;
  lp.fixed_pickup = pickup;
  lp.max_exact_stops = opt.max_exact_bunker_stops;
  auto load = optimize_quantities_and_bunkering(lp);
  sol.diag.lps_solved = load.lps_solved;
  if (!load.feasible) {
    sol.reason = "no bunkering pattern fits the fixed plan";
    return sol;
  }
  sol.feasible = true;
  sol.plan = build_plan(inst, ship_index, route, speeds, load);
  sol.serving_profit = load.profit;
  return sol;
}

}  // namespace fleetopt
