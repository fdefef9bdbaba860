#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "fleetopt/core/types.hpp"

namespace fleetopt {

// Fixed-route speed problem. Leg j departs stop j (stop 0 is the depot) and
// arrives at stop j+1; the arrival at stop j+1 must lie in window[j].
struct SpeedProblem {
  std::vector<double> distance;     // nm per leg
  std::vector<double> weight;       // t on each leg
  std::vector<double> fuel_value;   // currency per ton burned on each leg
  std::vector<double> processing;   // h spent at the departure stop of each leg
  std::vector<double> window_open;  // earliest arrival at the stop each leg reaches
  std::vector<double> window_close; // latest arrival at that stop (cycle deadline on the last leg)
  double consumption_const = 1.0;
  double speed_min = 1.0;
  double speed_max = 1.0;
};

struct SpeedResult {
  bool feasible = false;
  std::vector<double> speeds;
  double cost = 0.0;  // sum of fuel_value * burn
};

namespace detail {

// Interval of feasible cumulative sailing time before each arrival, derived by
// forward/backward propagation over the chain of prefix-sum constraints.
struct TimeChain {
  std::vector<double> lo_leg, hi_leg;  // per-leg sailing time bounds
  std::vector<double> lo_cum, hi_cum;  // per-arrival cumulative sailing time bounds
};

inline bool propagate_chain(const TimeChain& c, std::vector<double>& fwd_lo, std::vector<double>& fwd_hi,
                            std::vector<double>& bwd_lo, std::vector<double>& bwd_hi) {
  const std::size_t m = c.lo_leg.size();
  fwd_lo.assign(m, 0.0);
  fwd_hi.assign(m, 0.0);
  double plo = 0.0, phi = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    plo = std::max(plo + c.lo_leg[k], c.lo_cum[k]);
    phi = std::min(phi + c.hi_leg[k], c.hi_cum[k]);
    if (plo > phi + 1e-12) return false;
    fwd_lo[k] = plo;
    fwd_hi[k] = std::max(plo, phi);
  }
  bwd_lo.assign(m, -kInf);
  bwd_hi.assign(m, kInf);
  bwd_lo[m - 1] = c.lo_cum[m - 1];
  bwd_hi[m - 1] = c.hi_cum[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) {
    bwd_lo[k] = std::max(c.lo_cum[k], bwd_lo[k + 1] - c.hi_leg[k + 1]);
    bwd_hi[k] = std::min(c.hi_cum[k], bwd_hi[k + 1] - c.lo_leg[k + 1]);
  }
  return true;
}

}  // namespace detail

// Minimizes sum_j fuel_value_j * C * W_j * d_j * v_j^2 over the speed box and the
// arrival windows. In sailing-time variables tau_j = d_j / v_j the objective is
// sum a_j / tau_j^2 (convex) and every constraint is linear, so a log-barrier
// Newton method converges to the global optimum.
inline SpeedResult optimize_speeds(const SpeedProblem& sp) {
  SpeedResult res;
  const std::size_t m = sp.distance.size();
  if (m == 0) {
    res.feasible = true;
    return res;
  }
  detail::TimeChain chain;
  chain.lo_leg.resize(m);
  chain.hi_leg.resize(m);
  chain.lo_cum.resize(m);
  chain.hi_cum.resize(m);
  double proc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = sp.distance[j];
    chain.lo_leg[j] = d > 0.0 ? d / sp.speed_max : 0.0;
    chain.hi_leg[j] = d > 0.0 ? d / sp.speed_min : 0.0;
    proc += sp.processing[j];
    chain.lo_cum[j] = sp.window_open[j] - proc;
    chain.hi_cum[j] = sp.window_close[j] - proc;
  }
  std::vector<double> flo, fhi, blo, bhi;
  if (!detail::propagate_chain(chain, flo, fhi, blo, bhi)) return res;

  // Strictly interior start: walk forward taking the midpoint of what remains feasible.
  std::vector<double> tau(m, 0.0);
  bool degenerate = false;
  double prev = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double lo = std::max({prev + chain.lo_leg[k], chain.lo_cum[k], blo[k]});
    const double hi = std::min({prev + chain.hi_leg[k], chain.hi_cum[k], bhi[k]});
    if (lo > hi + 1e-9) return res;
    if (sp.distance[k] > 0.0 && hi - lo < 1e-9 * std::max(1.0, hi)) degenerate = true;
    const double p = 0.5 * (lo + hi);
    tau[k] = std::clamp(p - prev, chain.lo_leg[k], chain.hi_leg[k]);
    prev += tau[k];
  }

  // Free variables: legs with positive distance.
  std::vector<std::size_t> free_idx;
  for (std::size_t j = 0; j < m; ++j)
    if (sp.distance[j] > 0.0) free_idx.push_back(j);
  const std::size_t nf = free_idx.size();

  std::vector<double> a(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const double d = sp.distance[j];
    a[j] = sp.fuel_value[j] * sp.consumption_const * sp.weight[j] * d * d * d;
  }
  auto objective = [&](const std::vector<double>& t) {
    double f = 0.0;
    for (std::size_t j : free_idx) f += a[j] / (t[j] * t[j]);
    return f;
  };

  if (!degenerate && nf > 0) {
    // Linear constraints g_i(tau) = coef . tau + c > 0 over the free variables.
    struct Con {
      std::vector<double> coef;
      double c;
    };
    std::vector<Con> cons;
    std::vector<std::size_t> pos(m, nf);
    for (std::size_t i = 0; i < nf; ++i) pos[free_idx[i]] = i;
    for (std::size_t i = 0; i < nf; ++i) {
      const std::size_t j = free_idx[i];
      Con lo{std::vector<double>(nf, 0.0), -chain.lo_leg[j]};
      lo.coef[i] = 1.0;
      Con hi{std::vector<double>(nf, 0.0), chain.hi_leg[j]};
      hi.coef[i] = -1.0;
      cons.push_back(lo);
      cons.push_back(hi);
    }
    double cum_hi = 0.0, cum_lo = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      cum_hi += chain.hi_leg[k];
      cum_lo += chain.lo_leg[k];
      std::vector<double> coef(nf, 0.0);
      for (std::size_t j = 0; j <= k; ++j)
        if (pos[j] < nf) coef[pos[j]] = 1.0;
      // Skip windows that the speed box already implies.
      if (std::isfinite(chain.hi_cum[k]) && chain.hi_cum[k] < cum_hi - 1e-12) {
        Con c{coef, chain.hi_cum[k]};
        for (auto& x : c.coef) x = -x;
        cons.push_back(c);
      }
      if (std::isfinite(chain.lo_cum[k]) && chain.lo_cum[k] > cum_lo + 1e-12) cons.push_back({coef, -chain.lo_cum[k]});
    }
    const double f0 = objective(tau);
    const double scale = f0 > 0.0 ? 1.0 / f0 : 1.0;
    Eigen::VectorXd x(nf);
    for (std::size_t i = 0; i < nf; ++i) x[i] = tau[free_idx[i]];
    auto slack = [&](const Eigen::VectorXd& y, std::size_t ci) {
      double g = cons[ci].c;
      for (std::size_t i = 0; i < nf; ++i) g += cons[ci].coef[i] * y[i];
      return g;
    };
    auto barrier_value = [&](const Eigen::VectorXd& y, double t, bool& ok) {
      double v = 0.0;
      for (std::size_t i = 0; i < nf; ++i) v += t * scale * a[free_idx[i]] / (y[i] * y[i]);
      for (std::size_t ci = 0; ci < cons.size(); ++ci) {
        const double g = slack(y, ci);
        if (!(g > 0.0)) {
          ok = false;
          return 0.0;
        }
        v -= std::log(g);
      }
      ok = true;
      return v;
    };
    const double ncons = static_cast<double>(cons.size());
    double t = 1.0;
    for (int outer = 0; outer < 60; ++outer) {
      for (int inner = 0; inner < 100; ++inner) {
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(nf);
        Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(nf, nf);
        for (std::size_t i = 0; i < nf; ++i) {
          const double aj = t * scale * a[free_idx[i]];
          const double yi = x[i];
          grad[i] += -2.0 * aj / (yi * yi * yi);
          hess(i, i) += 6.0 * aj / (yi * yi * yi * yi);
        }
        for (std::size_t ci = 0; ci < cons.size(); ++ci) {
          const double g = slack(x, ci);
          Eigen::Map<const Eigen::VectorXd> cv(cons[ci].coef.data(), static_cast<Eigen::Index>(nf));
          grad -= cv / g;
          hess += cv * cv.transpose() / (g * g);
        }
        Eigen::VectorXd step = hess.ldlt().solve(-grad);
        const double decrement = -grad.dot(step);
        if (!(decrement > 1e-14)) break;
        bool ok = false;
        const double base = barrier_value(x, t, ok);
        double alpha = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
          Eigen::VectorXd cand = x + alpha * step;
          bool feas = false;
          const double val = barrier_value(cand, t, feas);
          if (feas && val <= base - 0.25 * alpha * decrement) {
            x = cand;
            moved = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!moved || decrement < 1e-13) break;
      }
      if (ncons / t < 1e-13) break;
      t *= 16.0;
    }
    for (std::size_t i = 0; i < nf; ++i) tau[free_idx[i]] = x[i];
  }

  res.speeds.assign(m, sp.speed_min);
  for (std::size_t j = 0; j < m; ++j) {
    if (sp.distance[j] <= 0.0) continue;
    double v = sp.distance[j] / tau[j];
    if (std::fabs(v - sp.speed_min) <= 1e-9 * sp.speed_min) v = sp.speed_min;
    if (std::fabs(v - sp.speed_max) <= 1e-9 * sp.speed_max) v = sp.speed_max;
    res.speeds[j] = std::clamp(v, sp.speed_min, sp.speed_max);
  }
  res.cost = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    res.cost += sp.fuel_value[j] * sp.consumption_const * sp.weight[j] * sp.distance[j] * res.speeds[j] * res.speeds[j];
  res.feasible = true;
  return res;
}

}  // namespace fleetopt
