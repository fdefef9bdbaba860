#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fleetopt/core/types.hpp"
#include "fleetopt/harness/random.hpp"

namespace fleetopt {

// Default fleet parameters used for fixtures and generated instances.
inline Ship default_ship() {
  Ship s;
  s.lightweight = 500.0;
  s.deadweight = 2000.0;
  s.fuel_capacity = 1500.0;
  s.min_bunker_fraction = 0.05;
  s.safety_fraction = 0.05;
  s.consumption_const = 7.55e-7;
  s.charter_revenue = 1e5;
  s.cycle_deadline = 168.0;
  s.speed_min = 14.0;
  s.speed_max = 24.0;
  return s;
}

inline constexpr double kDefaultUnitWeight = 0.3;  // t per TEU

struct GeneratorConfig {
  double coord_half_range = 1000.0;  // nm, i.e. [-10, 10] scaled by 100
  double zero_demand_prob = 0.3;
  double demand_lo = 2000.0, demand_hi = 4000.0;
  double revenue_lo = 90.0, revenue_hi = 160.0;
  double price_lo = 600.0, price_hi = 700.0;
  double deadline_lo = 40.0, deadline_hi = 170.0;
  double processing_time = 10.0;
  std::vector<double> tier_breaks{250.0, 500.0};   // t
  std::vector<double> tier_discounts{0.10, 0.20};  // off the base price
  Ship ship = default_ship();
  double unit_weight = kDefaultUnitWeight;
};

inline PriceSchedule tiered_schedule(double base, const GeneratorConfig& cfg) {
  std::vector<PriceTier> tiers;
  for (std::size_t k = 0; k < cfg.tier_breaks.size(); ++k)
    tiers.push_back({base * (1.0 - (k == 0 ? 0.0 : cfg.tier_discounts[k - 1])), cfg.tier_breaks[k]});
  tiers.push_back({base * (1.0 - (cfg.tier_discounts.empty() ? 0.0 : cfg.tier_discounts.back())), kInf});
  return PriceSchedule(std::move(tiers));
}

// Random instance with `ports` ports (depot included) and `ships` identical ships.
inline Instance generate_instance(std::uint64_t seed, std::size_t ports, std::size_t ships,
                                  const GeneratorConfig& cfg = {}) {
  Rng rng(seed);
  std::vector<Port> ps;
  for (std::size_t i = 0; i < ports; ++i) {
    Port p;
    if (i > 0) {
      p.coords = {rng.uniform(-cfg.coord_half_range, cfg.coord_half_range),
                  rng.uniform(-cfg.coord_half_range, cfg.coord_half_range)};
      p.delivery_demand = rng.bernoulli(cfg.zero_demand_prob) ? 0.0 : rng.uniform(cfg.demand_lo, cfg.demand_hi);
      p.pickup_demand = rng.bernoulli(cfg.zero_demand_prob) ? 0.0 : rng.uniform(cfg.demand_lo, cfg.demand_hi);
      p.delivery_revenue = rng.uniform(cfg.revenue_lo, cfg.revenue_hi);
      p.pickup_revenue = rng.uniform(cfg.revenue_lo, cfg.revenue_hi);
      p.window_close = rng.uniform(cfg.deadline_lo, cfg.deadline_hi);
      p.processing_time = cfg.processing_time;
    } else {
      p.processing_time = 0.0;
    }
    p.prices = tiered_schedule(rng.uniform(cfg.price_lo, cfg.price_hi), cfg);
    ps.push_back(p);
  }
  std::vector<Ship> ss(ships, cfg.ship);
  return Instance(std::move(ps), std::move(ss), cfg.unit_weight);
}

}  // namespace fleetopt
