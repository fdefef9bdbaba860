#pragma once

// Small hand-shaped instances shared by the unit and acceptance tests.

#include <cstdint>
#include <optional>
#include <vector>

#include "fleetopt/core/types.hpp"
#include "fleetopt/harness/generator.hpp"
#include "fleetopt/harness/random.hpp"
#include "fleetopt/single_ship/solver.hpp"

namespace fixtures {

using namespace fleetopt;

inline Port make_port(double x, double y, double price) {
  Port p;
  p.coords = {x, y};
  p.prices = PriceSchedule::flat(price);
  return p;
}

inline Port depot_port(double price = 650.0) {
  Port d = make_port(0.0, 0.0, price);
  d.processing_time = 0.0;
  return d;
}

// Depot, one demand port A and one zero-demand port M priced above everything
// else, so M never sees cargo or bunkering. Ship 0 serves {A, M}.
struct FlankingCase {
  Instance inst;
  std::size_t middle = 2;
};

inline std::optional<FlankingCase> flanking_instance(std::uint64_t seed) {
  Rng rng(seed * 31 + 5);
  Port d = depot_port(rng.uniform(600.0, 690.0));
  Port a = make_port(rng.uniform(-800.0, 800.0), rng.uniform(-800.0, 800.0), rng.uniform(600.0, 690.0));
  a.delivery_demand = rng.uniform(500.0, 4000.0);
  a.pickup_demand = rng.uniform(500.0, 4000.0);
  a.delivery_revenue = rng.uniform(90.0, 160.0);
  a.pickup_revenue = rng.uniform(90.0, 160.0);
  a.window_close = rng.uniform(60.0, 170.0);
  Port m = make_port(rng.uniform(-800.0, 800.0), rng.uniform(-800.0, 800.0), 700.0);
  Ship s = default_ship();
  s.cycle_deadline = rng.uniform(90.0, 170.0);
  m.window_close = s.cycle_deadline;
  Instance inst({d, a, m}, {s}, kDefaultUnitWeight);
  if (inst.distance(0, 1) < 100.0 || inst.distance(0, 2) < 100.0 || inst.distance(1, 2) < 100.0) return std::nullopt;
  return FlankingCase{std::move(inst), 2};
}

inline SingleShipTask full_task(const Instance& inst, std::size_t ship, std::vector<std::size_t> ports) {
  SingleShipTask t;
  t.inst = &inst;
  t.ship = ship;
  t.ports = std::move(ports);
  for (const auto& p : inst.ports()) {
    t.rem_delivery.push_back(p.delivery_demand);
    t.rem_pickup.push_back(p.pickup_demand);
  }
  return t;
}

}  // namespace fixtures
