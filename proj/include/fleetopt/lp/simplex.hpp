#pragma once

// Dense two-phase primal simplex for the small LPs that appear inside the
// single-ship planner and the exhaustive oracle (tens of variables and rows).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace fleetopt::lp {

enum class Sense { le, ge, eq };
enum class Status { optimal, infeasible, unbounded };

struct Row {
  std::vector<std::pair<std::size_t, double>> terms;
  Sense sense = Sense::le;
  double rhs = 0.0;
};

// maximize objective . x  subject to rows and lower <= x <= upper.
struct Problem {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  std::size_t add_variable(double obj, double lo = 0.0,
                           double hi = std::numeric_limits<double>::infinity()) {
    objective.push_back(obj);
    lower.push_back(lo);
    upper.push_back(hi);
    return objective.size() - 1;
  }

  void add_row(std::vector<std::pair<std::size_t, double>> terms, Sense sense, double rhs) {
    rows.push_back({std::move(terms), sense, rhs});
  }

  std::size_t variables() const noexcept { return objective.size(); }
};

struct Solution {
  Status status = Status::infeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

namespace detail {

// Tableau over columns y_j in [0, ub_j]. A nonbasic column sitting at its upper
// bound is stored complemented (y_j = ub_j - y'_j), so every nonbasic is at 0.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), a_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0), ub_(cols, kInfinity), comp_(cols, 0) {}

  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  double& at(std::size_t r, std::size_t c) { return a_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double& obj(std::size_t c) { return at(m_, c); }  // reduced costs row (minimization form)
  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  std::vector<std::size_t>& basis() noexcept { return basis_; }
  std::vector<double>& upper() noexcept { return ub_; }
  const std::vector<char>& complemented() const noexcept { return comp_; }

  void pivot(std::size_t r, std::size_t c) {
    const std::size_t w = n_ + 1;
    double* pr = &a_[r * w];
    const double inv = 1.0 / pr[c];
    for (std::size_t j = 0; j < w; ++j) pr[j] *= inv;
    pr[c] = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* pi = &a_[i * w];
      const double f = pi[c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) pi[j] -= f * pr[j];
      pi[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Moves nonbasic column c to its other bound.
  void complement(std::size_t c) {
    const double u = ub_[c];
    for (std::size_t i = 0; i <= m_; ++i) {
      double& x = at(i, c);
      if (x == 0.0) continue;
      at(i, n_) -= u * x;
      x = -x;
    }
    comp_[c] ^= 1;
  }

  // Minimizes the objective row over columns flagged in `allowed`.
  // Returns false when unbounded.
  bool optimize(const std::vector<char>& allowed, std::size_t& pivots, double eps) {
    std::size_t degenerate = 0;
    const std::size_t limit = 50000;
    for (std::size_t it = 0; it < limit; ++it) {
      const bool bland = degenerate > 30;
      std::size_t enter = n_;
      double best = -eps;
      for (std::size_t c = 0; c < n_; ++c) {
        if (!allowed[c]) continue;
        const double rc = at(m_, c);
        if (rc < best) {
          enter = c;
          if (bland) break;
          best = rc;
        }
      }
      if (enter == n_) return true;
      // Ratio test: a basic value reaches 0, a basic value reaches its upper
      // bound, or the entering column reaches its own upper bound.
      std::size_t leave = m_;
      bool leave_at_upper = false;
      double ratio = ub_[enter];
      for (std::size_t r = 0; r < m_; ++r) {
        const double coef = at(r, enter);
        double q;
        bool to_upper;
        if (coef > eps) {
          q = std::max(0.0, at(r, n_)) / coef;
          to_upper = false;
        } else if (coef < -eps && std::isfinite(ub_[basis_[r]])) {
          q = std::max(0.0, ub_[basis_[r]] - at(r, n_)) / -coef;
          to_upper = true;
        } else {
          continue;
        }
        if (q < ratio - 1e-12 || (q <= ratio + 1e-12 && leave < m_ && basis_[r] < basis_[leave])) {
          ratio = q;
          leave = r;
          leave_at_upper = to_upper;
        }
      }
      if (leave == m_) {
        if (!std::isfinite(ratio)) return false;
        complement(enter);  // bound flip, basis unchanged
        degenerate = 0;
        ++pivots;
        continue;
      }
      degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
      const std::size_t out = basis_[leave];
      pivot(leave, enter);
      if (leave_at_upper) complement(out);
      ++pivots;
    }
    return true;
  }

 private:
  std::size_t m_, n_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
  std::vector<double> ub_;
  std::vector<char> comp_;
};

}  // namespace detail

inline Solution solve(const Problem& prob, double eps = 1e-9) {
  const std::size_t nv = prob.variables();
  Solution sol;
  sol.x.assign(nv, 0.0);

  // Shift to x = lower + y and drop fixed variables.
  std::vector<long> col_of(nv, -1);
  std::vector<double> col_ub;
  std::size_t ny = 0;
  for (std::size_t j = 0; j < nv; ++j) {
    if (prob.upper[j] < prob.lower[j] - eps) return sol;  // infeasible bounds
    if (prob.upper[j] - prob.lower[j] > eps) {
      col_of[j] = static_cast<long>(ny++);
      col_ub.push_back(prob.upper[j] - prob.lower[j]);
    }
  }

  struct NRow {
    std::vector<std::pair<std::size_t, double>> terms;
    Sense sense;
    double rhs;
  };
  std::vector<NRow> rows;
  rows.reserve(prob.rows.size());
  for (const auto& r : prob.rows) {
    NRow nr{{}, r.sense, r.rhs};
    for (auto [j, c] : r.terms) {
      nr.rhs -= c * prob.lower[j];
      if (col_of[j] >= 0 && c != 0.0) nr.terms.emplace_back(static_cast<std::size_t>(col_of[j]), c);
    }
    if (nr.terms.empty()) {
      const double slack = std::max(1.0, std::fabs(r.rhs)) * 1e-9;
      const bool ok = (r.sense == Sense::le && nr.rhs >= -slack) || (r.sense == Sense::ge && nr.rhs <= slack) ||
                      (r.sense == Sense::eq && std::fabs(nr.rhs) <= slack);
      if (!ok) return sol;
      continue;
    }
    rows.push_back(std::move(nr));
  }

  // Row scaling and rhs >= 0 normalization.
  for (auto& r : rows) {
    double scale = 0.0;
    for (auto& t : r.terms) scale = std::max(scale, std::fabs(t.second));
    if (scale > 0.0 && scale != 1.0) {
      for (auto& t : r.terms) t.second /= scale;
      r.rhs /= scale;
    }
    if (r.rhs < 0.0) {
      for (auto& t : r.terms) t.second = -t.second;
      r.rhs = -r.rhs;
      if (r.sense == Sense::le) r.sense = Sense::ge;
      else if (r.sense == Sense::ge) r.sense = Sense::le;
    }
  }

  const std::size_t m = rows.size();
  std::size_t n_slack = 0, n_art = 0;
  for (const auto& r : rows) {
    if (r.sense != Sense::eq) ++n_slack;
    if (r.sense != Sense::le) ++n_art;
  }
  const std::size_t cols = ny + n_slack + n_art;
  detail::Tableau t(m, cols);
  for (std::size_t j = 0; j < ny; ++j) t.upper()[j] = col_ub[j];
  std::vector<char> is_art(cols, 0);
  std::size_t s_next = ny, a_next = ny + n_slack;
  for (std::size_t i = 0; i < m; ++i) {
    for (auto [j, c] : rows[i].terms) t.at(i, j) += c;
    t.rhs(i) = rows[i].rhs;
    if (rows[i].sense == Sense::le) {
      t.at(i, s_next) = 1.0;
      t.basis()[i] = s_next++;
    } else {
      if (rows[i].sense == Sense::ge) t.at(i, s_next++) = -1.0;
      t.at(i, a_next) = 1.0;
      is_art[a_next] = 1;
      t.basis()[i] = a_next++;
    }
  }

  std::vector<char> allowed(cols, 1);
  if (n_art > 0) {
    // Phase 1: minimize the sum of artificials.
    for (std::size_t c = 0; c <= cols; ++c) t.obj(c) = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_art[t.basis()[i]]) continue;
      for (std::size_t c = 0; c <= cols; ++c) t.obj(c) -= t.at(i, c);
      t.obj(t.basis()[i]) = 0.0;
    }
    t.optimize(allowed, sol.pivots, eps);
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (is_art[t.basis()[i]]) infeas += t.rhs(i);
    if (infeas > 1e-7) return sol;
    // Drive remaining (zero-level) artificials out of the basis.
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_art[t.basis()[i]]) continue;
      std::size_t best = cols;
      double mag = 1e-9;
      for (std::size_t c = 0; c < cols; ++c)
        if (!is_art[c] && std::fabs(t.at(i, c)) > mag) {
          mag = std::fabs(t.at(i, c));
          best = c;
        }
      if (best < cols) t.pivot(i, best);
    }
    for (std::size_t c = 0; c < cols; ++c)
      if (is_art[c]) allowed[c] = 0;
  }

  // Phase 2: minimize -objective. Complemented columns carry a negated cost.
  for (std::size_t c = 0; c <= cols; ++c) t.obj(c) = 0.0;
  for (std::size_t j = 0; j < nv; ++j)
    if (col_of[j] >= 0) {
      const auto c = static_cast<std::size_t>(col_of[j]);
      t.obj(c) = t.complemented()[c] ? prob.objective[j] : -prob.objective[j];
    }
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t b = t.basis()[i];
    const double f = t.obj(b);
    if (f == 0.0) continue;
    for (std::size_t c = 0; c <= cols; ++c) t.obj(c) -= f * t.at(i, c);
  }
  if (!t.optimize(allowed, sol.pivots, eps)) {
    sol.status = Status::unbounded;
    return sol;
  }

  std::vector<double> y(cols, 0.0);
  for (std::size_t i = 0; i < m; ++i) y[t.basis()[i]] = std::max(0.0, t.rhs(i));
  double value = 0.0;
  for (std::size_t j = 0; j < nv; ++j) {
    double xj = prob.lower[j];
    if (col_of[j] >= 0) {
      const auto c = static_cast<std::size_t>(col_of[j]);
      const double yc = t.complemented()[c] ? col_ub[c] - y[c] : y[c];
      xj += std::clamp(yc, 0.0, col_ub[c]);
    }
    sol.x[j] = xj;
    value += prob.objective[j] * xj;
  }
  sol.objective = value;
  sol.status = Status::optimal;
  return sol;
}

}  // namespace fleetopt::lp
