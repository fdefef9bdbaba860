#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "fleetopt/core/fuel.hpp"
#include "fleetopt/core/types.hpp"
#include "fleetopt/lp/simplex.hpp"

namespace fleetopt {


// Quantities and bunkering for a fixed route and fixed speeds.
struct LoadProblem {
  const Instance* inst = nullptr;
  std::size_t ship = 0;
  std::vector<std::size_t> route;          // customer ports in visiting order
  std::vector<double> speeds;              // route.size() + 1 legs
  std::vector<double> delivery_cap;        // remaining delivery demand per route stop
  std::vector<double> pickup_cap;          // remaining pickup demand per route stop
  std::optional<std::vector<double>> fixed_delivery;  // pin quantities (re-audits)
  std::optional<std::vector<double>> fixed_pickup;
  WeightModel weight_model = WeightModel::displacement;
  std::size_t max_exact_stops = 13;        // above this, greedy bunker-port search
};

struct LoadResult {
  bool feasible = false;
  std::vector<double> delivery;  // per route stop
  std::vector<double> pickup;
  std::vector<double> bunker;    // per stop, index 0 is the depot departure
  double initial_fuel = 0.0;
  double profit = 0.0;           // revenue - bunker cost under the instance prices
  std::size_t lps_solved = 0;
};

namespace detail {

// Linear form const + sum coef[v] * x[v] over the load LP variables.
struct LinForm {
  double constant = 0.0;
  std::vector<double> coef;
};

class LoadModel {
 public:
  explicit LoadModel(const LoadProblem& p) : p_(p), inst_(*p.inst), ship_(inst_.ship(p.ship)) {
    n_ = p.route.size();
    stops_.push_back(0);
    for (auto r : p.route) stops_.push_back(r);
    const double w = inst_.cargo_unit_weight();
    // Per-leg burn as a linear form over the 2n quantity variables.
    burn_.resize(n_ + 1);
    weight_.resize(n_ + 1);
    for (std::size_t j = 0; j <= n_; ++j) {
      const std::size_t from = stops_[j], to = j + 1 <= n_ ? stops_[j + 1] : 0;
      const double d = inst_.distance(from, to);
      const double kappa = d * ship_.consumption_const * p.speeds[j] * p.speeds[j];
      LinForm wt{ship_.lightweight, std::vector<double>(2 * n_, 0.0)};
      for (std::size_t i = 1; i <= n_; ++i) {
        if (i > j) wt.coef[i - 1] = w;       // deliveries still onboard
        if (i <= j) wt.coef[n_ + i - 1] = w; // pickups already onboard
      }
      weight_[j] = wt;
      LinForm fuel_w = wt;
      if (p.weight_model == WeightModel::constant_departure) {
        for (std::size_t i = 1; i <= n_; ++i) {
          fuel_w.coef[i - 1] = w;
          fuel_w.coef[n_ + i - 1] = 0.0;
        }
      }
      LinForm b{kappa * fuel_w.constant, std::vector<double>(2 * n_, 0.0)};
      for (std::size_t v = 0; v < 2 * n_; ++v) b.coef[v] = kappa * fuel_w.coef[v];
      burn_[j] = b;
    }
    qlo_.assign(2 * n_, 0.0);
    qhi_.assign(2 * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      qhi_[i] = std::max(0.0, p.delivery_cap[i]);
      qhi_[n_ + i] = std::max(0.0, p.pickup_cap[i]);
      if (p.fixed_delivery) qlo_[i] = qhi_[i] = std::max(0.0, (*p.fixed_delivery)[i]);
      if (p.fixed_pickup) qlo_[n_ + i] = qhi_[n_ + i] = std::max(0.0, (*p.fixed_pickup)[i]);
    }
  }

  std::size_t stop_count() const noexcept { return n_ + 1; }
  const PriceSchedule& schedule(std::size_t stop) const { return inst_.port(stops_[stop]).prices; }

  double burn_at(std::size_t leg, const std::vector<double>& q) const {
    double b = burn_[leg].constant;
    for (std::size_t v = 0; v < q.size(); ++v) b += burn_[leg].coef[v] * q[v];
    return b;
  }

  // Cheap necessary condition for a bunker-stop subset, using the least possible burn.
  bool subset_plausible(const std::vector<std::size_t>& subset) const {
    const double usable = ship_.fuel_capacity - ship_.safety_level();
    std::vector<double> min_burn(n_ + 1);
    double total = 0.0;
    for (std::size_t j = 0; j <= n_; ++j) {
      min_burn[j] = burn_at(j, qlo_);
      total += min_burn[j];
    }
    if (total + max_extra_burn() + 1e-9 < ship_.min_bunker() * static_cast<double>(subset.size())) return false;
    for (std::size_t a = 0; a < subset.size(); ++a) {
      const std::size_t s = subset[a];
      const std::size_t e = subset[(a + 1) % subset.size()];
      double seg = 0.0;
      std::size_t j = s;
      do {
        seg += min_burn[j];
        j = (j + 1) % (n_ + 1);
      } while (j != e);
      if (seg > usable + kFeasTol) return false;
    }
    return true;
  }

  double max_extra_burn() const {
    double extra = 0.0;
    for (std::size_t j = 0; j <= n_; ++j)
      for (std::size_t v = 0; v < 2 * n_; ++v) extra += burn_[j].coef[v] * (qhi_[v] - qlo_[v]);
    return extra;
  }

  struct Candidate {
    bool ok = false;
    double lp_value = 0.0;
    std::vector<double> q;
    std::vector<double> bunker;  // per stop
    double initial_fuel = 0.0;
  };

  // LP for a bunker subset where stop subset[a] pays lines[a] per ton.
  Candidate solve(const std::vector<std::size_t>& subset, const std::vector<CostLine>& lines) const {
    const double e_min = ship_.min_bunker();
    const double cap = ship_.fuel_capacity;
    const double safety = ship_.safety_level();
    const double w = inst_.cargo_unit_weight();
    lp::Problem prob;
    for (std::size_t i = 0; i < n_; ++i)
      prob.add_variable(inst_.port(stops_[i + 1]).delivery_revenue, qlo_[i], qhi_[i]);
    for (std::size_t i = 0; i < n_; ++i)
      prob.add_variable(inst_.port(stops_[i + 1]).pickup_revenue, qlo_[n_ + i], qhi_[n_ + i]);
    const std::size_t beta0 = 2 * n_;
    for (std::size_t a = 0; a < subset.size(); ++a) prob.add_variable(-lines[a].slope, 0.0, cap - e_min);
    const std::size_t iota = prob.add_variable(0.0, 0.0, cap - safety);

    // Capacity on every leg uses the physical weight.
    for (std::size_t j = 0; j <= n_; ++j) {
      std::vector<std::pair<std::size_t, double>> t;
      for (std::size_t v = 0; v < 2 * n_; ++v)
        if (weight_[j].coef[v] != 0.0) t.emplace_back(v, weight_[j].coef[v]);
      if (!t.empty()) prob.add_row(std::move(t), lp::Sense::le, ship_.deadweight - ship_.lightweight);
    }
    (void)w;

    // Fuel level on entering stop k (k = 1..n+1) minus the safety level:
    //   iota + sum_{s<k} (e_min + beta_s) - sum_{j<k} burn_j
    auto level_terms = [&](std::size_t k, double& constant) {
      std::vector<double> coef(prob.variables(), 0.0);
      constant = 0.0;
      coef[iota] = 1.0;
      for (std::size_t a = 0; a < subset.size(); ++a)
        if (subset[a] < k) {
          coef[beta0 + a] += 1.0;
          constant += e_min;
        }
      for (std::size_t j = 0; j < k; ++j) {
        constant -= burn_[j].constant;
        for (std::size_t v = 0; v < 2 * n_; ++v) coef[v] -= burn_[j].coef[v];
      }
      std::vector<std::pair<std::size_t, double>> t;
      for (std::size_t v = 0; v < coef.size(); ++v)
        if (coef[v] != 0.0) t.emplace_back(v, coef[v]);
      return t;
    };
    for (std::size_t k = 1; k <= n_; ++k) {
      double c = 0.0;
      auto t = level_terms(k, c);
      prob.add_row(std::move(t), lp::Sense::ge, -c);
    }
    {
      // Return level equals the initial level.
      double c = 0.0;
      auto t = level_terms(n_ + 1, c);
      t.erase(std::remove_if(t.begin(), t.end(), [&](auto& x) { return x.first == iota; }), t.end());
      prob.add_row(std::move(t), lp::Sense::eq, -c);
    }
    for (std::size_t a = 0; a < subset.size(); ++a) {
      // Tank capacity after bunkering at stop s.
      const std::size_t s = subset[a];
      double c = 0.0;
      auto t = level_terms(s, c);
      bool found = false;
      for (auto& x : t)
        if (x.first == beta0 + a) { x.second += 1.0; found = true; }
      if (!found) t.emplace_back(beta0 + a, 1.0);
      prob.add_row(std::move(t), lp::Sense::le, cap - safety - e_min - c);
    }

    auto sol = lp::solve(prob);
    Candidate cand;
    if (sol.status != lp::Status::optimal) return cand;
    cand.ok = true;
    cand.q.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(2 * n_));
    cand.bunker.assign(n_ + 1, 0.0);
    double fixed = 0.0;
    for (std::size_t a = 0; a < subset.size(); ++a) {
      cand.bunker[subset[a]] = e_min + sol.x[beta0 + a];
      fixed += lines[a].offset + lines[a].slope * e_min;
    }
    cand.initial_fuel = safety + sol.x[iota];
    cand.lp_value = sol.objective - fixed;
    return cand;
  }

  double true_profit(const Candidate& c) const {
    double p = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const Port& port = inst_.port(stops_[i + 1]);
      p += port.delivery_revenue * c.q[i] + port.pickup_revenue * c.q[n_ + i];
    }
    for (std::size_t s = 0; s <= n_; ++s)
      if (c.bunker[s] > 0.0) p -= bunker_cost(schedule(s), c.bunker[s]);
    return p;
  }

  // Tiers whose segment intersects the admissible bunker range.
  std::vector<std::size_t> relevant_tiers(std::size_t stop) const {
    const auto& sc = schedule(stop);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < sc.size(); ++k)
      if (sc.tier_lower(k) < ship_.fuel_capacity && sc.tier_upper(k) > ship_.min_bunker()) out.push_back(k);
    return out;
  }

  // Chord of the concave cost over [min_bunker, capacity]: never above the true cost there.
  CostLine chord(std::size_t stop) const {
    const auto& sc = schedule(stop);
    const double lo = ship_.min_bunker(), hi = ship_.fuel_capacity;
    const double flo = bunker_cost(sc, lo), fhi = bunker_cost(sc, hi);
    if (hi - lo <= 0.0) return {flo - sc.base_price() * lo, sc.base_price()};
    const double slope = (fhi - flo) / (hi - lo);
    return {flo - slope * lo, slope};
  }

 private:
  const LoadProblem& p_;
  const Instance& inst_;
  const Ship& ship_;
  std::size_t n_ = 0;
  std::vector<std::size_t> stops_;
  std::vector<LinForm> burn_, weight_;
  std::vector<double> qlo_, qhi_;
};

}  // namespace detail

// Chooses pickup/delivery quantities, bunkering stops and volumes for a fixed
// route and fixed speeds. Exact: every bunker-stop subset is tried, and within a
// subset every combination of discount tiers, each as an LP; subsets whose
// chord relaxation cannot beat the incumbent are skipped.
inline LoadResult optimize_quantities_and_bunkering(const LoadProblem& prob) {
  LoadResult res;
  detail::LoadModel model(prob);
  const std::size_t stops = model.stop_count();
  const std::size_t n = prob.route.size();

  double best = -kInf;
  detail::LoadModel::Candidate best_c;
  auto consider = [&](const detail::LoadModel::Candidate& c) {
    if (!c.ok) return;
    const double tp = model.true_profit(c);
    if (!best_c.ok || tp > best + 1e-9 * std::max(1.0, std::fabs(best))) {
      best = tp;
      best_c = c;
    }
  };

  auto evaluate_subset = [&](const std::vector<std::size_t>& subset) {
    if (!model.subset_plausible(subset)) return;
    std::vector<std::vector<std::size_t>> tiers(subset.size());
    bool single = true;
    std::vector<CostLine> lines(subset.size());
    for (std::size_t a = 0; a < subset.size(); ++a) {
      tiers[a] = model.relevant_tiers(subset[a]);
      if (tiers[a].size() > 1) single = false;
      lines[a] = tiers[a].empty() ? model.chord(subset[a]) : tier_line(model.schedule(subset[a]), tiers[a][0]);
    }
    if (single) {
      auto c = model.solve(subset, lines);
      ++res.lps_solved;
      consider(c);
      return;
    }
    for (std::size_t a = 0; a < subset.size(); ++a) lines[a] = model.chord(subset[a]);
    auto relax = model.solve(subset, lines);
    ++res.lps_solved;
    if (!relax.ok) return;
    if (best_c.ok && relax.lp_value <= best + 1e-9 * std::max(1.0, std::fabs(best))) return;
    std::vector<std::size_t> pick(subset.size(), 0);
    while (true) {
      for (std::size_t a = 0; a < subset.size(); ++a) lines[a] = tier_line(model.schedule(subset[a]), tiers[a][pick[a]]);
      auto c = model.solve(subset, lines);
      ++res.lps_solved;
      consider(c);
      std::size_t a = 0;
      while (a < subset.size() && ++pick[a] == tiers[a].size()) pick[a++] = 0;
      if (a == subset.size()) break;
    }
  };

  if (stops <= prob.max_exact_stops) {
    // Subsets in order of size, then lexicographically.
    for (std::size_t size = 1; size <= stops; ++size) {
      std::vector<std::size_t> subset(size);
      for (std::size_t i = 0; i < size; ++i) subset[i] = i;
      while (true) {
        evaluate_subset(subset);
        std::size_t i = size;
        while (i > 0 && subset[i - 1] == stops - size + i - 1) --i;
        if (i == 0) break;
        ++subset[i - 1];
        for (std::size_t j = i; j < size; ++j) subset[j] = subset[j - 1] + 1;
      }
    }
  } else {
    // Greedy: grow the subset one stop at a time while profit improves, then try swaps.
    std::vector<std::size_t> current;
    double current_val = -kInf;
    bool improved = true;
    while (improved && current.size() < stops) {
      improved = false;
      std::vector<std::size_t> best_next;
      for (std::size_t s = 0; s < stops; ++s) {
        if (std::find(current.begin(), current.end(), s) != current.end()) continue;
        auto trial = current;
        trial.insert(std::upper_bound(trial.begin(), trial.end(), s), s);
        const double before = best;
        evaluate_subset(trial);
        if (best > before) best_next = trial;
      }
      if (!best_next.empty() && best > current_val) {
        current = best_next;
        current_val = best;
        improved = true;
      }
    }
    for (std::size_t a = 0; a < current.size(); ++a)
      for (std::size_t s = 0; s < stops; ++s) {
        if (std::find(current.begin(), current.end(), s) != current.end()) continue;
        auto trial = current;
        trial[a] = s;
        std::sort(trial.begin(), trial.end());
        evaluate_subset(trial);
      }
  }

  if (!best_c.ok) return res;
  res.feasible = true;
  res.delivery.assign(best_c.q.begin(), best_c.q.begin() + static_cast<long>(n));
  res.pickup.assign(best_c.q.begin() + static_cast<long>(n), best_c.q.end());
  res.bunker = best_c.bunker;
  res.initial_fuel = best_c.initial_fuel;
  res.profit = best;
  return res;
}

}  // namespace fleetopt
