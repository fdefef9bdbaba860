#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "fleetopt/core/fuel.hpp"
#include "fleetopt/core/types.hpp"

namespace fleetopt {

// Constraint classes reported by the auditor. The reference string cites the
// constraint numbers of the fleet model each class covers.
enum class ViolationKind {
  demand,              // (1)
  routing,             // (2)-(6)
  weight_trajectory,   // (7)-(9)
  capacity,            // (10)
  fuel_cycle,          // (11)
  fuel_trajectory,     // (12)-(13)
  bunker_indicator,    // (14)
  bunker_bounds,       // (15)
  fuel_safety,         // (16)
  fuel_capacity,       // (17)
  arrival_trajectory,  // (18)-(20)
  time_window,         // (21)
  cycle_deadline,      // (22)
  nonnegativity,       // (23)
  speed_bounds,
  profit_mismatch,
};

inline const char* violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::demand: return "demand";
    case ViolationKind::routing: return "routing";
    case ViolationKind::weight_trajectory: return "weight-trajectory";
    case ViolationKind::capacity: return "capacity";
    case ViolationKind::fuel_cycle: return "fuel-cycle";
    case ViolationKind::fuel_trajectory: return "fuel-trajectory";
    case ViolationKind::bunker_indicator: return "bunker-indicator";
    case ViolationKind::bunker_bounds: return "bunker-bounds";
    case ViolationKind::fuel_safety: return "fuel-safety";
    case ViolationKind::fuel_capacity: return "fuel-capacity";
    case ViolationKind::arrival_trajectory: return "arrival-trajectory";
    case ViolationKind::time_window: return "time-window";
    case ViolationKind::cycle_deadline: return "cycle-deadline";
    case ViolationKind::nonnegativity: return "nonnegativity";
    case ViolationKind::speed_bounds: return "speed-bounds";
    case ViolationKind::profit_mismatch: return "profit-mismatch";
  }
  return "unknown";
}

inline const char* violation_constraint(ViolationKind k) {
  switch (k) {
    case ViolationKind::demand: return "(1)";
    case ViolationKind::routing: return "(2)-(6)";
    case ViolationKind::weight_trajectory: return "(7)-(9)";
    case ViolationKind::capacity: return "(10)";
    case ViolationKind::fuel_cycle: return "(11)";
    case ViolationKind::fuel_trajectory: return "(12)-(13)";
    case ViolationKind::bunker_indicator: return "(14)";
    case ViolationKind::bunker_bounds: return "(15)";
    case ViolationKind::fuel_safety: return "(16)";
    case ViolationKind::fuel_capacity: return "(17)";
    case ViolationKind::arrival_trajectory: return "(18)-(20)";
    case ViolationKind::time_window: return "(21)";
    case ViolationKind::cycle_deadline: return "(22)";
    case ViolationKind::nonnegativity: return "(23)";
    case ViolationKind::speed_bounds: return "speed box";
    case ViolationKind::profit_mismatch: return "objective";
  }
  return "";
}

struct Violation {
  ViolationKind kind;
  long ship = -1;  // 0-based, -1 when fleet-wide
  long port = -1;  // 0-based port index, -1 when not port specific
  std::string detail;

  std::string describe() const {
    std::ostringstream os;
    os << violation_name(kind) << " " << violation_constraint(kind);
    if (ship >= 0) os << " ship " << ship + 1;
    if (port >= 0) os << " port " << port + 1;
    if (!detail.empty()) os << ": " << detail;
    return os.str();
  }
};

struct AuditReport {
  double profit = 0.0;               // audited total
  std::vector<double> ship_profits;  // audited per ship (charter revenue when chartered)
  std::vector<Violation> violations;

  bool feasible() const noexcept { return violations.empty(); }
  bool has(ViolationKind k) const {
    for (const auto& v : violations)
      if (v.kind == k) return true;
    return false;
  }
};

// Burned fuel on one leg: distance * C * W * v^2.
inline double leg_burn(const Instance& inst, const Ship& ship, std::size_t from, std::size_t to,
                       double weight, double speed) {
  const double d = inst.distance(from, to);
  if (d == 0.0) return 0.0;
  return d * fuel_rate(ship.consumption_const, weight, speed);
}

// Recomputes arrival, fuel_on_entry and weight_on_departure of every visit from
// the decisions (sequence, quantities, bunkering, speeds and the initial fuel
// stored in visits[0].fuel_on_entry).
inline void derive_states(const Instance& inst, std::size_t ship_index, ShipPlan& plan,
                          WeightModel model = WeightModel::displacement) {
  if (plan.chartered || plan.visits.empty()) return;
  const Ship& ship = inst.ship(ship_index);
  const double w = inst.cargo_unit_weight();
  auto& v = plan.visits;
  double delivered = 0.0;
  for (const auto& x : v) delivered += x.delivery_qty;
  double weight = ship.lightweight + w * delivered;
  const double departure_weight = weight;
  double fuel = v[0].fuel_on_entry;
  double time = 0.0;
  v[0].arrival = 0.0;
  v[0].weight_on_departure = weight;
  for (std::size_t j = 0; j + 1 < v.size(); ++j) {
    if (j > 0) {
      weight += w * (v[j].pickup_qty - v[j].delivery_qty);
      v[j].weight_on_departure = weight;
      v[j].fuel_on_entry = fuel;
    }
    const double speed = plan.legs[j].speed;
    const double d = inst.distance(v[j].port, v[j + 1].port);
    const double fuel_weight = model == WeightModel::constant_departure ? departure_weight : weight;
    fuel = fuel + v[j].bunker_amount - (d == 0.0 ? 0.0 : d * ship.consumption_const * fuel_weight * speed * speed);
    time = time + (d == 0.0 ? 0.0 : d / speed) + inst.port(v[j].port).processing_time;
    v[j + 1].arrival = time;
  }
  v.back().fuel_on_entry = fuel;
  v.back().weight_on_departure = weight;
}

inline double ship_serving_profit(const Instance& inst, const ShipPlan& plan) {
  if (plan.chartered) return 0.0;
  double p = 0.0;
  for (std::size_t j = 0; j < plan.visits.size(); ++j) {
    const auto& x = plan.visits[j];
    const Port& port = inst.port(x.port);
    p += port.delivery_revenue * x.delivery_qty + port.pickup_revenue * x.pickup_qty;
    if (j + 1 < plan.visits.size()) p -= bunker_cost(port.prices, std::max(0.0, x.bunker_amount));
  }
  return p;
}

namespace detail {

inline std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

inline void structural_check(const Instance& inst, const FleetPlan& plan) {
  if (plan.plans.size() != inst.ship_count())
    throw ValidationError("plan", "expected " + std::to_string(inst.ship_count()) + " ship plans, got " +
                                      std::to_string(plan.plans.size()));
  if (!plan.ship_profits.empty() && plan.ship_profits.size() != inst.ship_count())
    throw ValidationError("plan", "per-ship profit breakdown has wrong length");
  for (std::size_t k = 0; k < plan.plans.size(); ++k) {
    const auto& sp = plan.plans[k];
    const std::string f = "ship_plan " + std::to_string(k + 1);
    for (const auto& x : sp.visits)
      if (x.port >= inst.port_count()) throw ValidationError(f, "visit port out of range");
    if (sp.visits.empty() ? !sp.legs.empty() : sp.legs.size() + 1 != sp.visits.size())
      throw ValidationError(f, "legs must connect consecutive visits");
    for (std::size_t j = 0; j < sp.legs.size(); ++j)
      if (sp.legs[j].from != sp.visits[j].port || sp.legs[j].to != sp.visits[j + 1].port)
        throw ValidationError(f, "leg " + std::to_string(j + 1) + " endpoints do not match visits");
  }
}

}  // namespace detail

// Independent audit of a fleet plan against every constraint of the model.
// Never throws on infeasibility; throws ValidationError on shape mismatches.
inline AuditReport evaluate_fleet_plan(const Instance& inst, const FleetPlan& plan) {
  detail::structural_check(inst, plan);
  AuditReport rep;
  const double w = inst.cargo_unit_weight();
  const double tol = kFeasTol;
  auto flag = [&](ViolationKind kind, long ship, long port, std::string detail) {
    rep.violations.push_back({kind, ship, port, std::move(detail)});
  };
  using detail::num;

  std::vector<double> served_delivery(inst.port_count(), 0.0), served_pickup(inst.port_count(), 0.0);

  for (std::size_t k = 0; k < plan.plans.size(); ++k) {
    const ShipPlan& sp = plan.plans[k];
    const Ship& ship = inst.ship(k);
    const long ks = static_cast<long>(k);
    if (sp.chartered) {
      if (!sp.visits.empty()) flag(ViolationKind::routing, ks, -1, "chartered ship has visits");
      rep.ship_profits.push_back(ship.charter_revenue);
      continue;
    }
    const auto& v = sp.visits;
    const std::size_t m = v.size();
    if (m < 3 || v.front().port != 0 || v.back().port != 0) {
      flag(ViolationKind::routing, ks, -1, "route must start and end at the depot and visit a customer port");
      if (m < 2) {
        rep.ship_profits.push_back(ship_serving_profit(inst, sp));
        continue;
      }
    }
    std::vector<int> seen(inst.port_count(), 0);
    for (std::size_t j = 1; j + 1 < m; ++j) {
      if (v[j].port == 0) flag(ViolationKind::routing, ks, 0, "depot visited mid-route");
      else if (++seen[v[j].port] > 1) flag(ViolationKind::routing, ks, static_cast<long>(v[j].port), "port visited twice");
    }

    double delivered = 0.0;
    for (const auto& x : v) {
      if (x.delivery_qty < -tol || x.pickup_qty < -tol || x.bunker_amount < -tol)
        flag(ViolationKind::nonnegativity, ks, static_cast<long>(x.port), "negative quantity");
      delivered += x.delivery_qty;
      served_delivery[x.port] += x.delivery_qty;
      served_pickup[x.port] += x.pickup_qty;
    }
    const auto& term = v.back();
    if (term.delivery_qty != 0.0 || term.pickup_qty != 0.0)
      flag(ViolationKind::routing, ks, 0, "cargo handled at the terminal depot record");
    if (term.bunker_flag || term.bunker_amount != 0.0)
      flag(ViolationKind::bunker_indicator, ks, 0, "bunkering at the terminal depot record, where the ship does not depart");

    const double i_max = ship.fuel_capacity;
    double weight = ship.lightweight + w * delivered;
    double fuel = v[0].fuel_on_entry;
    double time = 0.0;
    if (std::fabs(v[0].arrival) > tol) flag(ViolationKind::arrival_trajectory, ks, 0, "departure time must be 0");
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const auto& x = v[j];
      const long pj = static_cast<long>(x.port);
      if (j > 0) {
        weight += w * (x.pickup_qty - x.delivery_qty);
        if (std::fabs(x.fuel_on_entry - fuel) > tol)
          flag(ViolationKind::fuel_trajectory, ks, pj, "declared fuel " + num(x.fuel_on_entry) + " != recomputed " + num(fuel));
        if (std::fabs(x.arrival - time) > tol)
          flag(ViolationKind::arrival_trajectory, ks, pj, "declared arrival " + num(x.arrival) + " != recomputed " + num(time));
        if (time < inst.port(x.port).window_open - tol || time > inst.port(x.port).window_close + tol)
          flag(ViolationKind::time_window, ks, pj,
               "arrival " + num(time) + " outside [" + num(inst.port(x.port).window_open) + ", " +
                   num(inst.port(x.port).window_close) + "]");
      }
      if (std::fabs(x.weight_on_departure - weight) > tol)
        flag(ViolationKind::weight_trajectory, ks, pj, "declared weight " + num(x.weight_on_departure) + " != recomputed " + num(weight));
      if (weight > ship.deadweight + tol)
        flag(ViolationKind::capacity, ks, pj, "weight " + num(weight) + " exceeds deadweight " + num(ship.deadweight));
      if (fuel < ship.safety_level() - tol)
        flag(ViolationKind::fuel_safety, ks, pj, "fuel " + num(fuel) + " below safety level " + num(ship.safety_level()));
      const double bunker = std::max(0.0, x.bunker_amount);
      if (!x.bunker_flag) {
        if (bunker > tol) flag(ViolationKind::bunker_bounds, ks, pj, "bunkering without the bunker flag");
      } else if (bunker < ship.min_bunker() - tol || bunker > i_max + tol) {
        flag(ViolationKind::bunker_bounds, ks, pj,
             "bunker " + num(bunker) + " outside [" + num(ship.min_bunker()) + ", " + num(i_max) + "]");
      }
      if (fuel + bunker > i_max + tol)
        flag(ViolationKind::fuel_capacity, ks, pj, "fuel after bunkering " + num(fuel + bunker) + " exceeds capacity " + num(i_max));

      double speed = sp.legs[j].speed;
      if (!(speed >= ship.speed_min - tol && speed <= ship.speed_max + tol)) {
        flag(ViolationKind::speed_bounds, ks, pj, "speed " + num(speed) + " outside speed box");
        if (!(speed > 0.0)) speed = ship.speed_min;
      }
      const double d = inst.distance(x.port, v[j + 1].port);
      fuel = fuel + bunker - (d == 0.0 ? 0.0 : d * ship.consumption_const * weight * speed * speed);
      time = time + (d == 0.0 ? 0.0 : d / speed) + inst.port(x.port).processing_time;
    }
    // terminal record
    if (std::fabs(term.fuel_on_entry - fuel) > tol)
      flag(ViolationKind::fuel_trajectory, ks, 0, "declared return fuel " + num(term.fuel_on_entry) + " != recomputed " + num(fuel));
    if (std::fabs(term.arrival - time) > tol)
      flag(ViolationKind::arrival_trajectory, ks, 0, "declared return " + num(term.arrival) + " != recomputed " + num(time));
    if (std::fabs(term.weight_on_departure - weight) > tol)
      flag(ViolationKind::weight_trajectory, ks, 0, "declared return weight != recomputed");
    if (fuel < ship.safety_level() - tol)
      flag(ViolationKind::fuel_safety, ks, 0, "return fuel " + num(fuel) + " below safety level");
    if (std::fabs(fuel - v[0].fuel_on_entry) > tol)
      flag(ViolationKind::fuel_cycle, ks, 0, "return fuel " + num(fuel) + " != initial fuel " + num(v[0].fuel_on_entry));
    if (time > ship.cycle_deadline + tol)
      flag(ViolationKind::cycle_deadline, ks, 0, "return " + num(time) + " after cycle deadline " + num(ship.cycle_deadline));

    rep.ship_profits.push_back(ship_serving_profit(inst, sp));
  }

  for (std::size_t i = 0; i < inst.port_count(); ++i) {
    const Port& p = inst.port(i);
    if (served_delivery[i] > p.delivery_demand + tol)
      flag(ViolationKind::demand, -1, static_cast<long>(i),
           "delivered " + num(served_delivery[i]) + " > demand " + num(p.delivery_demand));
    if (served_pickup[i] > p.pickup_demand + tol)
      flag(ViolationKind::demand, -1, static_cast<long>(i),
           "picked up " + num(served_pickup[i]) + " > demand " + num(p.pickup_demand));
  }

  for (double p : rep.ship_profits) rep.profit += p;
  auto mismatch = [](double declared, double audited) {
    return std::fabs(declared - audited) > 1e-6 * std::max(1.0, std::fabs(audited));
  };
  if (mismatch(plan.total_profit, rep.profit))
    flag(ViolationKind::profit_mismatch, -1, -1,
         "declared " + num(plan.total_profit) + " vs audited " + num(rep.profit));
  for (std::size_t k = 0; k < plan.ship_profits.size(); ++k)
    if (mismatch(plan.ship_profits[k], rep.ship_profits[k]))
      flag(ViolationKind::profit_mismatch, static_cast<long>(k), -1,
           "declared " + num(plan.ship_profits[k]) + " vs audited " + num(rep.ship_profits[k]));
  return rep;
}

}  // namespace fleetopt
