#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fleetopt/core/fuel.hpp"
#include "fleetopt/core/types.hpp"
#include "fleetopt/core/verify.hpp"
#include "fleetopt/lp/simplex.hpp"

namespace fleetopt {

struct OracleConfig {
  double speed_step = 1.0;      // knots
  double qty_step_fraction = 0.0;  // 0: quantities continuous; else grid step as a fraction of demand
  std::size_t max_digits = 10;  // K * (N - 1)
  std::size_t max_ports_per_ship = 4;
  double wall_cap_secs = std::numeric_limits<double>::infinity();
};

class OracleCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  FleetPlan plan;
  Assignment best;
  double profit = 0.0;
  bool complete = true;  // false when the wall-clock cap stopped enumeration
  std::size_t assignments_done = 0;
  std::size_t assignments_total = 0;
  std::size_t lps_solved = 0;
  double wall_secs = 0.0;
};

namespace oracle_detail {

struct Best {
  bool feasible = false;
  double profit = -kInf;
  ShipPlan plan;
};

class Enumerator {
 public:
  Enumerator(const Instance& inst, const OracleConfig& cfg) : inst_(inst), cfg_(cfg) {
    start_ = std::chrono::steady_clock::now();
  }

  bool timed_out() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() >= cfg_.wall_cap_secs;
  }
  double elapsed() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }
  std::size_t lps() const noexcept { return lps_; }
  bool aborted() const noexcept { return aborted_; }

  // Best plan for ship k visiting exactly `ports` with the given remaining demand.
  const Best& ship_best(std::size_t k, const std::vector<std::size_t>& ports, const std::vector<double>& rd,
                        const std::vector<double>& rp) {
    std::string key;
    auto put = [&](double x) {
      char b[sizeof(double)];
      std::memcpy(b, &x, sizeof x);
      key.append(b, sizeof b);
    };
    const Ship& s = inst_.ship(k);
    for (double x : {s.lightweight, s.deadweight, s.fuel_capacity, s.min_bunker_fraction, s.safety_fraction,
                     s.consumption_const, s.cycle_deadline, s.speed_min, s.speed_max})
      put(x);
    for (auto p : ports) {
      put(static_cast<double>(p));
      put(rd[p]);
      put(rp[p]);
    }
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Best b = solve_ship(k, ports, rd, rp);
    if (aborted_) {
      static const Best none;
      return none;
    }
    return memo_.emplace(std::move(key), std::move(b)).first->second;
  }

 private:
  std::vector<double> speed_grid(const Ship& s) const {
    std::vector<double> g;
    for (double v = s.speed_min; v < s.speed_max - 1e-9; v += cfg_.speed_step) g.push_back(v);
    g.push_back(s.speed_max);
    return g;
  }

  // Arrival times for a route and speed indices; false if a window or the cycle deadline fails.
  bool timing_ok(const Ship& s, const std::vector<std::size_t>& stops, const std::vector<double>& grid,
                 const std::vector<std::size_t>& idx) const {
    double t = 0.0;
    for (std::size_t j = 0; j + 1 < stops.size(); ++j) {
      const double d = inst_.distance(stops[j], stops[j + 1]);
      t += inst_.port(stops[j]).processing_time + (d == 0.0 ? 0.0 : d / grid[idx[j]]);
      if (j + 2 < stops.size()) {
        const Port& p = inst_.port(stops[j + 1]);
        if (t < p.window_open - kFeasTol || t > p.window_close + kFeasTol) return false;
      } else if (t > s.cycle_deadline + kFeasTol) {
        return false;
      }
    }
    return true;
  }

  // Every speed-index vector that meets the timing and where no single leg can
  // be slowed one grid step without breaking it. Slower is never costlier in fuel.
  // A cycle must also burn at least one minimum purchase, since every ton bought is burned.
  std::vector<std::vector<std::size_t>> minimal_speed_vectors(const Ship& s, const std::vector<std::size_t>& stops,
                                                              const std::vector<double>& grid,
                                                              const std::vector<double>& heaviest) const {
    const std::size_t legs = stops.size() - 1;
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> idx(legs, 0);
    auto burn_ok = [&](const std::vector<std::size_t>& ix) {
      double b = 0.0;
      for (std::size_t j = 0; j < legs; ++j)
        b += inst_.distance(stops[j], stops[j + 1]) * s.consumption_const * heaviest[j] * grid[ix[j]] * grid[ix[j]];
      return b >= s.min_bunker() - kFeasTol;
    };
    auto ok_all = [&](const std::vector<std::size_t>& ix) { return timing_ok(s, stops, grid, ix) && burn_ok(ix); };
    std::function<void(std::size_t, double)> rec = [&](std::size_t j, double t) {
      if (j == legs) {
        if (!ok_all(idx)) return;
        for (std::size_t a = 0; a < legs; ++a) {
          if (idx[a] == 0) continue;
          --idx[a];
          const bool ok = ok_all(idx);
          ++idx[a];
          if (ok) return;
        }
        out.push_back(idx);
        return;
      }
      const double d = inst_.distance(stops[j], stops[j + 1]);
      const double depart = t + inst_.port(stops[j]).processing_time;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double arrive = depart + (d == 0.0 ? 0.0 : d / grid[g]);
        const bool last = j + 1 == legs;
        const double close = last ? s.cycle_deadline : inst_.port(stops[j + 1]).window_close;
        if (arrive > close + kFeasTol) continue;
        if (!last && arrive < inst_.port(stops[j + 1]).window_open - kFeasTol) continue;
        // remaining legs at top speed must still fit the cycle deadline
        double rest = arrive;
        for (std::size_t r = j + 1; r < legs; ++r) {
          const double dr = inst_.distance(stops[r], stops[r + 1]);
          rest += inst_.port(stops[r]).processing_time + (dr == 0.0 ? 0.0 : dr / s.speed_max);
        }
        if (rest > s.cycle_deadline + kFeasTol) continue;
        idx[j] = g;
        rec(j + 1, arrive);
      }
      idx[j] = 0;
    };
    rec(0, 0.0);
    return out;
  }

  static constexpr std::size_t kChord = static_cast<std::size_t>(-1);

  struct LpOutcome {
    bool ok = false;
    double value = -kInf;
    std::vector<double> qd, qp, bunker;
    double fuel0 = 0.0;
  };

  // Explicit model with weight and fuel-level variables for one route, speed
  // vector, bunker-stop subset and one price segment per bunker stop.
  LpOutcome solve_lp(const Ship& s, const std::vector<std::size_t>& stops, const std::vector<double>& speeds,
                     const std::vector<double>& qd_lo, const std::vector<double>& qd_hi,
                     const std::vector<double>& qp_lo, const std::vector<double>& qp_hi,
                     const std::vector<std::size_t>& bunker_stops, const std::vector<std::size_t>& segment,
                     double reach = kInf) {
    ++lps_;
    const std::size_t n = stops.size() - 2;  // customers
    const std::size_t legs = n + 1;
    const double w = inst_.cargo_unit_weight();
    const double imax = s.fuel_capacity;
    lp::Problem p;
    std::vector<std::size_t> vqd(n), vqp(n), vw(legs), vi(legs + 1), vb(legs, SIZE_MAX);
    for (std::size_t i = 0; i < n; ++i) vqd[i] = p.add_variable(inst_.port(stops[i + 1]).delivery_revenue, qd_lo[i], qd_hi[i]);
    for (std::size_t i = 0; i < n; ++i) vqp[i] = p.add_variable(inst_.port(stops[i + 1]).pickup_revenue, qp_lo[i], qp_hi[i]);
    for (std::size_t j = 0; j < legs; ++j) vw[j] = p.add_variable(0.0, s.lightweight, s.deadweight);
    for (std::size_t j = 0; j <= legs; ++j) vi[j] = p.add_variable(0.0, s.safety_level(), imax);
    double constant = 0.0;
    for (std::size_t a = 0; a < bunker_stops.size(); ++a) {
      const std::size_t st = bunker_stops[a];
      const auto& sched = inst_.port(stops[st]).prices;
      const std::size_t k = segment[a];
      if (k == kChord) {
        // secant of the concave cost over the reachable purchase range: an overestimate of profit
        const double lo = s.min_bunker(), hi = std::max(lo, std::min(imax, reach));
        const double flo = bunker_cost(sched, lo), fhi = bunker_cost(sched, hi);
        const double slope = hi > lo ? (fhi - flo) / (hi - lo) : sched.base_price();
        vb[st] = p.add_variable(-slope, lo, hi);
        constant += -(flo - slope * lo);
        continue;
      }
      const double lo = std::max(s.min_bunker(), sched.tier_lower(k));
      const double hi = std::min(imax, sched.tier_upper(k));
      const double price = sched.tiers()[k].unit_price;
      vb[st] = p.add_variable(-price, lo, hi);
      constant += -(bunker_cost(sched, sched.tier_lower(k)) - price * sched.tier_lower(k));
    }
    // weights
    {
      std::vector<std::pair<std::size_t, double>> t{{vw[0], 1.0}};
      for (std::size_t i = 0; i < n; ++i) t.emplace_back(vqd[i], -w);
      p.add_row(std::move(t), lp::Sense::eq, s.lightweight);
    }
    for (std::size_t j = 1; j < legs; ++j)
      p.add_row({{vw[j], 1.0}, {vw[j - 1], -1.0}, {vqp[j - 1], -w}, {vqd[j - 1], w}}, lp::Sense::eq, 0.0);
    // fuel flow
    for (std::size_t j = 0; j < legs; ++j) {
      const double d = inst_.distance(stops[j], stops[j + 1]);
      const double kappa = d * s.consumption_const * speeds[j] * speeds[j];
      std::vector<std::pair<std::size_t, double>> t{{vi[j + 1], 1.0}, {vi[j], -1.0}, {vw[j], kappa}};
      if (vb[j] != SIZE_MAX) t.emplace_back(vb[j], -1.0);
      p.add_row(std::move(t), lp::Sense::eq, 0.0);
      if (vb[j] != SIZE_MAX) p.add_row({{vi[j], 1.0}, {vb[j], 1.0}}, lp::Sense::le, imax);
    }
    p.add_row({{vi[legs], 1.0}, {vi[0], -1.0}}, lp::Sense::eq, 0.0);
    auto sol = lp::solve(p);
    LpOutcome out;
    if (sol.status != lp::Status::optimal) return out;
    out.ok = true;
    out.value = sol.objective + constant;
    for (std::size_t i = 0; i < n; ++i) {
      out.qd.push_back(sol.x[vqd[i]]);
      out.qp.push_back(sol.x[vqp[i]]);
    }
    out.bunker.assign(legs, 0.0);
    for (std::size_t j = 0; j < legs; ++j)
      if (vb[j] != SIZE_MAX) out.bunker[j] = sol.x[vb[j]];
    out.fuel0 = sol.x[vi[0]];
    return out;
  }

  Best solve_ship(std::size_t k, std::vector<std::size_t> ports, const std::vector<double>& rd,
                  const std::vector<double>& rp) {
    Best best;
    if (ports.empty()) {
      best.feasible = true;
      best.profit = 0.0;
      return best;
    }
    const Ship& s = inst_.ship(k);
    const auto grid = speed_grid(s);
    std::sort(ports.begin(), ports.end());
    const std::size_t n = ports.size();

    // quantity choices per customer and direction
    auto choices = [&](double cap) {
      std::vector<std::pair<double, double>> c;
      if (cfg_.qty_step_fraction <= 0.0 || cap <= 0.0) {
        c.emplace_back(0.0, std::max(0.0, cap));
      } else {
        const std::size_t steps = static_cast<std::size_t>(std::llround(1.0 / cfg_.qty_step_fraction));
        for (std::size_t i = 0; i <= steps; ++i) {
          const double q = std::min(cap, cap * static_cast<double>(i) / static_cast<double>(steps));
          c.emplace_back(q, q);
        }
      }
      return c;
    };

    do {
      std::vector<std::size_t> stops{0};
      for (auto p : ports) stops.push_back(p);
      stops.push_back(0);
      // displacement bound per leg with every remaining demand on board
      std::vector<double> heaviest(n + 1);
      for (std::size_t j = 0; j <= n; ++j) {
        double cargo = 0.0;
        for (std::size_t i = 0; i < n; ++i) cargo += i >= j ? rd[ports[i]] : rp[ports[i]];
        heaviest[j] = std::min(s.deadweight, s.lightweight + inst_.cargo_unit_weight() * cargo);
      }
      auto vectors = minimal_speed_vectors(s, stops, grid, heaviest);
      {
        // cheapest-burning vectors first so the incumbent tightens early
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t v = 0; v < vectors.size(); ++v) {
          double b = 0.0;
          for (std::size_t j = 0; j + 1 < stops.size(); ++j)
            b += inst_.distance(stops[j], stops[j + 1]) * grid[vectors[v][j]] * grid[vectors[v][j]];
          order.emplace_back(b, v);
        }
        std::sort(order.begin(), order.end());
        std::vector<std::vector<std::size_t>> sorted;
        for (auto& o : order) sorted.push_back(std::move(vectors[o.second]));
        vectors = std::move(sorted);
      }
      if (vectors.empty()) continue;
      std::vector<std::vector<std::pair<double, double>>> dch(n), pch(n);
      for (std::size_t i = 0; i < n; ++i) {
        dch[i] = choices(rd[ports[i]]);
        pch[i] = choices(rp[ports[i]]);
      }
      double p_min = kInf;
      for (std::size_t j = 0; j + 1 < stops.size(); ++j) p_min = std::min(p_min, inst_.port(stops[j]).prices.cheapest_price());
      for (const auto& idx : vectors) {
        if (timed_out()) {
          aborted_ = true;
          return best;
        }
        std::vector<double> speeds;
        for (auto g : idx) speeds.push_back(grid[g]);
        // quantity grid combinations (a single continuous box by default)
        std::vector<std::size_t> qsel(2 * n, 0);
        while (true) {
          std::vector<double> dlo(n), dhi(n), plo(n), phi(n);
          for (std::size_t i = 0; i < n; ++i) {
            dlo[i] = dch[i][qsel[i]].first;
            dhi[i] = dch[i][qsel[i]].second;
            plo[i] = pch[i][qsel[n + i]].first;
            phi[i] = pch[i][qsel[n + i]].second;
          }
          // Skip when even fuel at the cheapest marginal price cannot beat the incumbent.
          if (!best.feasible || relaxed_bound(s, stops, speeds, dlo, dhi, plo, phi, p_min) > best.profit)
            enumerate_bunkering(s, stops, speeds, dlo, dhi, plo, phi, best, k);
          std::size_t a = 0;
          while (a < 2 * n) {
            const std::size_t lim = a < n ? dch[a].size() : pch[a - n].size();
            if (++qsel[a] < lim) break;
            qsel[a++] = 0;
          }
          if (a == 2 * n) break;
        }
      }
    } while (std::next_permutation(ports.begin(), ports.end()));
    return best;
  }

  // Revenue minus all burned fuel priced at `price`, with fuel limits dropped.
  double relaxed_bound(const Ship& s, const std::vector<std::size_t>& stops, const std::vector<double>& speeds,
                       const std::vector<double>& dlo, const std::vector<double>& dhi, const std::vector<double>& plo,
                       const std::vector<double>& phi, double price) {
    ++lps_;
    const std::size_t n = stops.size() - 2, legs = n + 1;
    const double w = inst_.cargo_unit_weight();
    lp::Problem p;
    std::vector<std::size_t> vqd(n), vqp(n), vw(legs);
    for (std::size_t i = 0; i < n; ++i) vqd[i] = p.add_variable(inst_.port(stops[i + 1]).delivery_revenue, dlo[i], dhi[i]);
    for (std::size_t i = 0; i < n; ++i) vqp[i] = p.add_variable(inst_.port(stops[i + 1]).pickup_revenue, plo[i], phi[i]);
    for (std::size_t j = 0; j < legs; ++j) {
      const double d = inst_.distance(stops[j], stops[j + 1]);
      vw[j] = p.add_variable(-price * d * s.consumption_const * speeds[j] * speeds[j], s.lightweight, s.deadweight);
    }
    std::vector<std::pair<std::size_t, double>> t{{vw[0], 1.0}};
    for (std::size_t i = 0; i < n; ++i) t.emplace_back(vqd[i], -w);
    p.add_row(std::move(t), lp::Sense::eq, s.lightweight);
    for (std::size_t j = 1; j < legs; ++j)
      p.add_row({{vw[j], 1.0}, {vw[j - 1], -1.0}, {vqp[j - 1], -w}, {vqd[j - 1], w}}, lp::Sense::eq, 0.0);
    auto sol = lp::solve(p);
    return sol.status == lp::Status::optimal ? sol.objective + 1e-6 * std::max(1.0, std::fabs(sol.objective)) : -kInf;
  }

  void enumerate_bunkering(const Ship& s, const std::vector<std::size_t>& stops, const std::vector<double>& speeds,
                           const std::vector<double>& dlo, const std::vector<double>& dhi, const std::vector<double>& plo,
                           const std::vector<double>& phi, Best& best, std::size_t k) {
    const std::size_t legs = stops.size() - 1;
    // Every ton bought is burned, so no single purchase exceeds the burn of a
    // fully laden ship over the whole cycle.
    double max_burn = 0.0;
    for (std::size_t j = 0; j < legs; ++j) {
      double cargo = 0.0;
      for (std::size_t i = 0; i < dhi.size(); ++i) cargo += i >= j ? dhi[i] : phi[i];
      const double heaviest = std::min(s.deadweight, s.lightweight + inst_.cargo_unit_weight() * cargo);
      max_burn += inst_.distance(stops[j], stops[j + 1]) * s.consumption_const * heaviest * speeds[j] * speeds[j];
    }
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << legs); ++mask) {
      std::vector<std::size_t> bs;
      for (std::size_t j = 0; j < legs; ++j)
        if (mask >> j & 1u) bs.push_back(j);
      if (s.min_bunker() * static_cast<double>(bs.size()) > max_burn + kFeasTol) continue;
      std::vector<std::vector<std::size_t>> segs(bs.size());
      for (std::size_t a = 0; a < bs.size(); ++a) {
        const auto& sched = inst_.port(stops[bs[a]]).prices;
        for (std::size_t t = 0; t < sched.size(); ++t)
          if (std::max(s.min_bunker(), sched.tier_lower(t)) <=
              std::min({s.fuel_capacity, sched.tier_upper(t),
                        max_burn - s.min_bunker() * static_cast<double>(bs.size() - 1) + kFeasTol}))
            segs[a].push_back(t);
      }
      bool empty = false, several = false;
      for (const auto& sg : segs) {
        empty = empty || sg.empty();
        several = several || sg.size() > 1;
      }
      if (empty) continue;
      const double reach = max_burn - s.min_bunker() * static_cast<double>(bs.size() - 1);
      if (best.feasible && several) {
        auto ub = solve_lp(s, stops, speeds, dlo, dhi, plo, phi, bs, std::vector<std::size_t>(bs.size(), kChord), reach);
        if (!ub.ok || ub.value <= best.profit + 1e-9 * std::max(1.0, std::fabs(best.profit))) continue;
      }
      std::vector<std::size_t> pick(bs.size(), 0), seg(bs.size());
      while (true) {
        for (std::size_t a = 0; a < bs.size(); ++a) seg[a] = segs[a][pick[a]];
        auto r = solve_lp(s, stops, speeds, dlo, dhi, plo, phi, bs, seg);
        if (r.ok && (!best.feasible || r.value > best.profit + 1e-9 * std::max(1.0, std::fabs(best.profit)))) {
          best.feasible = true;
          best.profit = r.value;
          best.plan = make_plan(k, stops, speeds, r);
        }
        std::size_t a = 0;
        while (a < bs.size() && ++pick[a] == segs[a].size()) pick[a++] = 0;
        if (a == bs.size()) break;
      }
    }
  }

  ShipPlan make_plan(std::size_t k, const std::vector<std::size_t>& stops, const std::vector<double>& speeds,
                     const LpOutcome& r) const {
    ShipPlan sp;
    sp.chartered = false;
    for (std::size_t j = 0; j < stops.size(); ++j) {
      Visit v;
      v.port = stops[j];
      if (j > 0 && j + 1 < stops.size()) {
        v.delivery_qty = r.qd[j - 1];
        v.pickup_qty = r.qp[j - 1];
      }
      if (j + 1 < stops.size()) {
        v.bunker_amount = r.bunker[j];
        v.bunker_flag = r.bunker[j] > 0.0;
      }
      sp.visits.push_back(v);
    }
    sp.visits[0].fuel_on_entry = r.fuel0;
    for (std::size_t j = 0; j + 1 < stops.size(); ++j) sp.legs.push_back({stops[j], stops[j + 1], speeds[j]});
    derive_states(inst_, k, sp);
    return sp;
  }

  const Instance& inst_;
  OracleConfig cfg_;
  std::chrono::steady_clock::time_point start_;
  std::map<std::string, Best> memo_;
  std::size_t lps_ = 0;
  bool aborted_ = false;
};

}  // namespace oracle_detail

// Exhaustive baseline: every assignment, every visiting order, every grid speed
// vector that cannot be slowed further, and every bunkering pattern with an
// exact LP for quantities and volumes. Ships are evaluated in index order on the
// demand left by earlier ships, and charter out unless operating pays more.
inline OracleResult oracle_solve(const Instance& inst, const OracleConfig& cfg = {}) {
  const std::size_t K = inst.ship_count(), C = inst.customer_count();
  if (!(cfg.speed_step > 0.0)) throw ValidationError("oracle_speed_step", "must be > 0");
  if (cfg.qty_step_fraction < 0.0 || cfg.qty_step_fraction > 1.0)
    throw ValidationError("oracle_qty_step", "must be in [0, 1]");
  if (K * C > cfg.max_digits)
    throw OracleCapError("oracle refuses: K*(N-1) = " + std::to_string(K * C) + " exceeds cap " +
                         std::to_string(cfg.max_digits));
  if (C > cfg.max_ports_per_ship)
    throw OracleCapError("oracle refuses: up to " + std::to_string(C) + " ports per ship exceeds cap " +
                         std::to_string(cfg.max_ports_per_ship));
  if (K * C >= 63) throw OracleCapError("oracle refuses: assignment space too large to enumerate");

  oracle_detail::Enumerator en(inst, cfg);
  OracleResult res;
  res.assignments_total = std::size_t{1} << (K * C);
  bool have = false;
  for (std::uint64_t code = 0; code < res.assignments_total; ++code) {
    Assignment y(K, C);
    // lexicographic over the digit string
    for (std::size_t d = 0; d < K * C; ++d) y.set_digit(d, code >> (K * C - 1 - d) & 1u);
    std::vector<double> rd, rp;
    for (const auto& p : inst.ports()) {
      rd.push_back(p.delivery_demand);
      rp.push_back(p.pickup_demand);
    }
    FleetPlan fp;
    fp.plans.resize(K);
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const auto ports = y.ports_of(k);
      double pk = inst.ship(k).charter_revenue;
      if (!ports.empty()) {
        const auto& b = en.ship_best(k, ports, rd, rp);
        if (en.aborted()) break;
        if (b.feasible && b.profit > pk) {
          pk = b.profit;
          fp.plans[k] = b.plan;
          for (const auto& v : b.plan.visits) {
            rd[v.port] = std::max(0.0, rd[v.port] - v.delivery_qty);
            rp[v.port] = std::max(0.0, rp[v.port] - v.pickup_qty);
          }
        }
      }
      fp.ship_profits.push_back(pk);
      total += pk;
    }
    if (en.aborted()) break;
    fp.total_profit = total;
    ++res.assignments_done;
    if (!have || total > res.profit + 1e-9 * std::max(1.0, std::fabs(res.profit))) {
      have = true;
      res.profit = total;
      res.plan = fp;
      res.best = y;
    }
  }
  res.complete = !en.aborted();
  res.lps_solved = en.lps();
  res.wall_secs = en.elapsed();
  return res;
}

struct GapResult {
  double gap = 0.0;
  bool grid_too_coarse = false;  // heuristic beat the oracle by more than the grid slack
};

inline constexpr double kGridSlack = 0.005;

inline GapResult gap(double heuristic_profit, double oracle_profit) {
  if (!(oracle_profit > 0.0)) throw std::domain_error("gap: oracle profit must be positive");
  GapResult g;
  const double raw = (oracle_profit - heuristic_profit) / oracle_profit;
  g.grid_too_coarse = raw < -kGridSlack;
  g.gap = std::max(raw, -kGridSlack);
  return g;
}

}  // namespace fleetopt
