#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fleetopt/core/types.hpp"
#include "fleetopt/core/verify.hpp"
#include "fleetopt/search/evaluate.hpp"
#include "fleetopt/single_ship/solver.hpp"

namespace fleetopt {

// Report-time integer quantities: floors every served quantity to whole TEU and
// re-solves bunkering with route and speeds kept. A ship whose floored plan has
// no feasible bunkering keeps its fractional quantities; the count of such
// ships is returned through `kept`.
inline FleetPlan round_quantities(const Instance& inst, const FleetPlan& plan, std::size_t* kept = nullptr) {
  FleetPlan out = plan;
  std::size_t unchanged = 0;
  for (std::size_t k = 0; k < out.plans.size(); ++k) {
    ShipPlan& sp = out.plans[k];
    if (sp.chartered) continue;
    std::vector<double> dq, pq, speeds;
    for (std::size_t j = 1; j + 1 < sp.visits.size(); ++j) {
      dq.push_back(std::floor(sp.visits[j].delivery_qty + 1e-9));
      pq.push_back(std::floor(sp.visits[j].pickup_qty + 1e-9));
    }
    for (const auto& g : sp.legs) speeds.push_back(g.speed);
    auto sol = rebunker(inst, k, sp.customer_sequence(), speeds, dq, pq);
    if (sol.feasible) sp = sol.plan;
    else ++unchanged;
  }
  finalize_profits(out, inst);
  if (kept) *kept = unchanged;
  return out;
}

}  // namespace fleetopt
