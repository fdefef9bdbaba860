#pragma once

#include <algorithm>
#include <stdexcept>

#include "fleetopt/core/types.hpp"

namespace fleetopt {

// Fuel burned per nautical mile: C * W * v^2 (equivalently C * W / t^2 with t = 1/v).
inline double fuel_rate(double consumption_const, double weight, double speed) {
  if (!(weight > 0.0) || !(speed > 0.0)) throw std::domain_error("fuel_rate: weight and speed must be positive");
  return consumption_const * weight * speed * speed;
}

// Cost of bunkering `amount` tons under incremental discounts.
inline double bunker_cost(const PriceSchedule& sched, double amount) {
  if (!(amount >= 0.0)) throw std::domain_error("bunker_cost: amount must be >= 0");
  double cost = 0.0;
  for (std::size_t k = 0; k < sched.size(); ++k) {
    const double lo = sched.tier_lower(k);
    if (amount <= lo) break;
    const double hi = std::min(amount, sched.tier_upper(k));
    cost += sched.tiers()[k].unit_price * (hi - lo);
  }
  return cost;
}

// Tier k's cost line extended over all B >= 0. Because the schedule is concave,
// bunker_cost(B) == min_k tier_line(k, B).
struct CostLine {
  double offset = 0.0;
  double slope = 0.0;
  double operator()(double b) const noexcept { return offset + slope * b; }
};

inline CostLine tier_line(const PriceSchedule& sched, std::size_t k) {
  const double lo = sched.tier_lower(k);
  const double p = sched.tiers()[k].unit_price;
  return {bunker_cost(sched, lo) - p * lo, p};
}

// Marginal price in effect just above `amount`.
inline double marginal_price(const PriceSchedule& sched, double amount) {
  for (std::size_t k = 0; k < sched.size(); ++k)
    if (amount < sched.tier_upper(k)) return sched.tiers()[k].unit_price;
  return sched.cheapest_price();
}

}  // namespace fleetopt
