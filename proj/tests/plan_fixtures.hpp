#pragma once

// Random plan construction for verifier tests. States (weights, fuel, times)
// are computed here with straightforward arithmetic, independently of the
// library's verifier, and `reference_classes` re-derives which constraint
// classes a plan breaks. Violations are injected by mutating one decision and
// rebuilding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "fleetopt/core/fuel.hpp"
#include "fleetopt/core/types.hpp"
#include "fleetopt/core/verify.hpp"
#include "fleetopt/harness/generator.hpp"
#include "fleetopt/harness/random.hpp"

namespace fixtures {

using namespace fleetopt;

struct Decisions {
  std::vector<std::size_t> route;  // customer ports, 0-based indices
  std::vector<double> delivery, pickup;
  std::vector<double> speeds;          // route.size() + 1 legs
  std::vector<double> bunker;          // per departure stop, 0 = depot
  std::vector<char> bunker_flag;
  double initial_fuel = 0.0;
  bool terminal_bunker_flag = false;
};

// Builds the ship plan of ship 0 with states from the decisions.
inline ShipPlan build(const Instance& inst, const Decisions& d) {
  const Ship& s = inst.ship(0);
  const double w = inst.cargo_unit_weight();
  ShipPlan sp;
  sp.chartered = false;
  std::vector<std::size_t> stops{0};
  for (auto p : d.route) stops.push_back(p);
  stops.push_back(0);
  double weight = s.lightweight;
  for (double q : d.delivery) weight += w * q;
  double fuel = d.initial_fuel, time = 0.0;
  for (std::size_t j = 0; j + 1 < stops.size(); ++j) {
    Visit v;
    v.port = stops[j];
    if (j > 0) {
      v.delivery_qty = d.delivery[j - 1];
      v.pickup_qty = d.pickup[j - 1];
      weight = weight - w * v.delivery_qty + w * v.pickup_qty;
    }
    v.bunker_flag = d.bunker_flag[j] != 0;
    v.bunker_amount = d.bunker[j];
    v.arrival = time;
    v.fuel_on_entry = fuel;
    v.weight_on_departure = weight;
    sp.visits.push_back(v);
    const double dist = inst.distance(stops[j], stops[j + 1]);
    const double speed = d.speeds[j];
    sp.legs.push_back({stops[j], stops[j + 1], speed});
    fuel = fuel + d.bunker[j] - dist * s.consumption_const * weight * speed * speed;
    time = time + dist / speed + inst.port(stops[j]).processing_time;
  }
  Visit end;
  end.port = 0;
  end.arrival = time;
  end.fuel_on_entry = fuel;
  end.weight_on_departure = weight;
  end.bunker_flag = d.terminal_bunker_flag;
  sp.visits.push_back(end);
  return sp;
}

inline FleetPlan fleet_of(const Instance& inst, const ShipPlan& sp) {
  FleetPlan fp;
  fp.plans.assign(inst.ship_count(), ShipPlan{});
  fp.plans[0] = sp;
  double total = 0.0;
  for (std::size_t k = 0; k < inst.ship_count(); ++k) {
    double p = inst.ship(k).charter_revenue;
    if (k == 0) {
      p = 0.0;
      for (std::size_t j = 0; j < sp.visits.size(); ++j) {
        const auto& v = sp.visits[j];
        const auto& port = inst.port(v.port);
        p += port.delivery_revenue * v.delivery_qty + port.pickup_revenue * v.pickup_qty;
        if (j + 1 < sp.visits.size()) p -= bunker_cost(port.prices, v.bunker_amount);
      }
    }
    fp.ship_profits.push_back(p);
    total += p;
  }
  fp.total_profit = total;
  return fp;
}

// Constraint classes broken by the plan of ship 0, by constraint number.
inline std::set<int> reference_classes(const Instance& inst, const ShipPlan& sp) {
  const Ship& s = inst.ship(0);
  const double tol = 1e-6;
  std::set<int> out;
  const auto& v = sp.visits;
  for (std::size_t j = 1; j + 1 < v.size(); ++j) {
    const Port& p = inst.port(v[j].port);
    if (v[j].delivery_qty > p.delivery_demand + tol || v[j].pickup_qty > p.pickup_demand + tol) out.insert(1);
    if (v[j].arrival > p.window_close + tol || v[j].arrival < p.window_open - tol) out.insert(21);
  }
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j].weight_on_departure > s.deadweight + tol) out.insert(10);
    if (v[j].fuel_on_entry < s.safety_fraction * s.fuel_capacity - tol) out.insert(16);
    if (j + 1 == v.size()) {
      if (v[j].bunker_flag || v[j].bunker_amount != 0.0) out.insert(14);
      continue;
    }
    const double b = v[j].bunker_amount;
    if (v[j].bunker_flag ? (b < s.min_bunker_fraction * s.fuel_capacity - tol || b > s.fuel_capacity + tol) : b > tol)
      out.insert(15);
    if (v[j].fuel_on_entry + b > s.fuel_capacity + tol) out.insert(17);
  }
  if (v.back().arrival > s.cycle_deadline + tol) out.insert(22);
  if (std::fabs(v.back().fuel_on_entry - v.front().fuel_on_entry) > tol) out.insert(11);
  for (const auto& g : sp.legs)
    if (g.speed < s.speed_min - tol || g.speed > s.speed_max + tol) out.insert(0);
  return out;
}

inline int constraint_number(ViolationKind k) {
  switch (k) {
    case ViolationKind::demand: return 1;
    case ViolationKind::capacity: return 10;
    case ViolationKind::fuel_cycle: return 11;
    case ViolationKind::bunker_indicator: return 14;
    case ViolationKind::bunker_bounds: return 15;
    case ViolationKind::fuel_safety: return 16;
    case ViolationKind::fuel_capacity: return 17;
    case ViolationKind::time_window: return 21;
    case ViolationKind::cycle_deadline: return 22;
    default: return -1;
  }
}

// Sets depot bunkering to the total burn and a margin of fuel above the safety level.
inline bool fill_fuel(const Instance& inst, Decisions& d, double margin) {
  const Ship& s = inst.ship(0);
  d.bunker.assign(d.route.size() + 1, 0.0);
  d.bunker_flag.assign(d.route.size() + 1, 0);
  d.initial_fuel = 0.0;
  const ShipPlan dry = build(inst, d);
  const double burn = -dry.visits.back().fuel_on_entry;
  if (burn < s.min_bunker() + 1.0) return false;
  d.bunker[0] = burn;
  d.bunker_flag[0] = 1;
  d.initial_fuel = s.safety_level() + margin;
  return d.initial_fuel + burn <= s.fuel_capacity - 1.0;
}

struct RandomPlan {
  Instance inst;
  Decisions decisions;
};

// A feasible single-ship plan on a generated instance; ship 1 (index 1) charters.
inline RandomPlan random_plan(std::uint64_t seed) {
  Rng rng(seed * 7919 + 17);
  for (std::uint64_t attempt = 0;; ++attempt) {
    Instance inst = generate_instance(seed * 1000 + attempt, 6, 2);
    const Ship& s = inst.ship(0);
    Decisions d;
    std::vector<std::size_t> ports;
    for (std::size_t i = 1; i < inst.port_count(); ++i) ports.push_back(i);
    for (std::size_t i = ports.size(); i > 1; --i) std::swap(ports[i - 1], ports[rng.below(i)]);
    d.route.assign(ports.begin(), ports.begin() + 1 + static_cast<long>(rng.below(3)));
    double cargo_d = 0.0;
    for (auto p : d.route) {
      d.delivery.push_back(rng.uniform() * inst.port(p).delivery_demand);
      d.pickup.push_back(rng.uniform() * inst.port(p).pickup_demand);
      cargo_d += d.delivery.back();
    }
    // keep every displacement at least 50 t under deadweight
    double peak = s.lightweight + inst.cargo_unit_weight() * cargo_d, wgt = peak;
    for (std::size_t j = 0; j < d.route.size(); ++j) {
      wgt += inst.cargo_unit_weight() * (d.pickup[j] - d.delivery[j]);
      peak = std::max(peak, wgt);
    }
    const double room = s.deadweight - 50.0 - s.lightweight;
    if (peak - s.lightweight > room) {
      const double f = room / (peak - s.lightweight);
      for (auto& q : d.delivery) q *= f;
      for (auto& q : d.pickup) q *= f;
    }
    for (std::size_t j = 0; j <= d.route.size(); ++j) d.speeds.push_back(rng.uniform(0.5 * (s.speed_min + s.speed_max), s.speed_max));
    if (!fill_fuel(inst, d, 20.0 + 100.0 * rng.uniform())) continue;
    const ShipPlan sp = build(inst, d);
    if (!reference_classes(inst, sp).empty()) continue;
    return {std::move(inst), std::move(d)};
  }
}

inline constexpr int kInjectable[] = {1, 10, 14, 15, 16, 17, 21, 22};

// Mutates one decision of a feasible plan so that exactly constraint class
// `target` breaks (by the reference check). Returns nullopt when this plan
// cannot host that injection.
inline std::optional<ShipPlan> inject(const RandomPlan& rp, int target, Rng& rng) {
  const Instance& inst = rp.inst;
  const Ship& s = inst.ship(0);
  Decisions d = rp.decisions;
  const std::size_t n = d.route.size();
  const double w = inst.cargo_unit_weight();
  const ShipPlan base = build(inst, d);
  switch (target) {
    case 1: {  // serve more than the demand at one stop; refuel for the extra weight
      const std::size_t j = rng.below(n);
      const Port& p = inst.port(d.route[j]);
      if (p.pickup_demand > 0.0 && rng.bernoulli(0.5)) d.pickup[j] = p.pickup_demand + 1.0 + rng.uniform() * 10.0;
      else if (p.delivery_demand > 0.0) d.delivery[j] = p.delivery_demand + 1.0 + rng.uniform() * 10.0;
      else if (p.pickup_demand > 0.0) d.pickup[j] = p.pickup_demand + 1.0 + rng.uniform() * 10.0;
      else return std::nullopt;
      if (!fill_fuel(inst, d, d.initial_fuel - s.safety_level())) return std::nullopt;
      break;
    }
    case 10: {  // within demand, push one departure displacement over deadweight
      // extra pickup at stop j loads departures j..n; extra delivery loads 0..j-1
      const std::size_t j = rng.below(n);
      const bool pick = rng.bernoulli(0.5);
      double peak = 0.0;
      for (std::size_t t = pick ? j + 1 : 0; t <= (pick ? n : j); ++t)
        peak = std::max(peak, base.visits[t].weight_on_departure);
      const double extra = (s.deadweight - peak + 0.5 + rng.uniform()) / w;
      const Port& p = inst.port(d.route[j]);
      double& q = pick ? d.pickup[j] : d.delivery[j];
      if (q + extra > (pick ? p.pickup_demand : p.delivery_demand)) return std::nullopt;
      q += extra;
      if (!fill_fuel(inst, d, d.initial_fuel - s.safety_level())) return std::nullopt;
      break;
    }
    case 14:  // bunker flag on the terminal depot record, where the ship never departs
      d.terminal_bunker_flag = true;
      break;
    case 15: {  // flag without a legal amount, or an amount without the flag
      if (n == 0) return std::nullopt;
      const std::size_t j = 1 + rng.below(n);
      if (rng.bernoulli(0.5)) {
        d.bunker_flag[j] = 1;  // amount 0 < minimum purchase
      } else {
        d.bunker_flag[0] = 0;  // depot purchase kept, flag dropped
      }
      break;
    }
    case 16: {  // shift the whole fuel trajectory under the safety level
      double lo = kInf;
      for (const auto& v : base.visits) lo = std::min(lo, v.fuel_on_entry);
      d.initial_fuel -= lo - s.safety_level() + 1.0 + 5.0 * rng.uniform();
      if (d.initial_fuel < 0.0) return std::nullopt;
      break;
    }
    case 17: {  // shift the whole fuel trajectory over the tank size
      double hi = 0.0;
      for (std::size_t j = 0; j + 1 < base.visits.size(); ++j)
        hi = std::max(hi, base.visits[j].fuel_on_entry + base.visits[j].bunker_amount);
      d.initial_fuel += s.fuel_capacity - hi + 1.0 + 5.0 * rng.uniform();
      break;
    }
    case 21: {  // slow the leg into one stop until its window closes
      const std::size_t j = 1 + rng.below(n);
      const double late = inst.port(d.route[j - 1]).window_close - base.visits[j].arrival;
      const double delay = late + 0.5 + rng.uniform();
      const double dist = inst.distance(base.visits[j - 1].port, base.visits[j].port);
      const double v = dist / (dist / d.speeds[j - 1] + delay);
      if (!(v >= s.speed_min)) return std::nullopt;
      d.speeds[j - 1] = v;
      if (!fill_fuel(inst, d, d.initial_fuel - s.safety_level())) return std::nullopt;
      break;
    }
    case 22: {  // slow the return leg past the cycle deadline
      const double delay = s.cycle_deadline - base.visits.back().arrival + 0.5 + rng.uniform();
      const double dist = inst.distance(d.route.back(), 0);
      const double v = dist / (dist / d.speeds[n] + delay);
      if (!(v >= s.speed_min)) return std::nullopt;
      d.speeds[n] = v;
      if (!fill_fuel(inst, d, d.initial_fuel - s.safety_level())) return std::nullopt;
      break;
    }
    default:
      return std::nullopt;
  }
  ShipPlan sp = build(inst, d);
  if (reference_classes(inst, sp) != std::set<int>{target}) return std::nullopt;
  return sp;
}

struct InjectedCase {
  RandomPlan base;
  ShipPlan plan;
  std::size_t attempts;
};

// Draws random plans from `seed` onward until one hosts the injection.
inline InjectedCase injected_case(std::uint64_t seed, int target, Rng& rng) {
  for (std::uint64_t a = 0;; ++a) {
    RandomPlan rp = random_plan(seed + a);
    if (auto sp = inject(rp, target, rng)) return {std::move(rp), std::move(*sp), a + 1};
  }
}

}  // namespace fixtures
