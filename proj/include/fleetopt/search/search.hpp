#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "fleetopt/core/types.hpp"
#include "fleetopt/harness/random.hpp"
#include "fleetopt/search/evaluate.hpp"
#include "fleetopt/search/refine.hpp"

namespace fleetopt {

struct SearchOptions {
  SolverOptions solver;
  std::size_t m = 10;               // samples per iteration
  std::size_t stagnation = 10;      // iterations without a new incumbent before stopping
  double budget_secs = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 1;
  bool use_refine = true;
  std::size_t max_iterations = std::numeric_limits<std::size_t>::max();
};

struct TraceRecord {
  std::size_t iteration = 0;
  std::string bits;
  double h = 0.0;        // sequential evaluation before refinement
  double refined = 0.0;  // value used by the search
  bool refine_changed = false;
  bool cached = false;
  double wall_secs = 0.0;
};

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace) {
  os << "iteration,bits,h,refined_value,refine_changed,cached,wall_secs\n";
  os.precision(17);
  for (const auto& t : trace)
    os << t.iteration << ',' << t.bits << ',' << t.h << ',' << t.refined << ',' << (t.refine_changed ? 1 : 0) << ','
       << (t.cached ? 1 : 0) << ',' << t.wall_secs << '\n';
}

struct EvalRecord {
  double h = 0.0;
  double value = 0.0;
  Assignment refined_y;
  FleetPlan plan;
  bool refine_changed = false;
  std::size_t order = 0;  // position in evaluation order
};

// Visited assignments with their cached values, the incumbent and the clock.
class SearchState {
 public:
  SearchState(const Instance& inst, const SearchOptions& opt)
      : inst_(inst), opt_(opt), cache_(opt.solver), start_(std::chrono::steady_clock::now()) {}

  const Instance& instance() const noexcept { return inst_; }
  const SearchOptions& options() const noexcept { return opt_; }
  SingleShipCache& cache() noexcept { return cache_; }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  bool out_of_time() const { return elapsed() >= opt_.budget_secs; }

  bool visited(const Assignment& y) const { return records_.count(y) != 0; }
  const std::vector<Assignment>& visit_order() const noexcept { return order_; }
  const EvalRecord& record(const Assignment& y) const { return records_.at(y); }
  const std::vector<TraceRecord>& trace() const noexcept { return trace_; }

  const Assignment& incumbent() const { return order_.at(incumbent_); }
  double incumbent_value() const { return records_.at(order_.at(incumbent_)).value; }
  bool has_incumbent() const noexcept { return !order_.empty(); }

  std::size_t iteration = 0;

  // Value of y; evaluates and refines on first sight. Ties never replace the incumbent.
  const EvalRecord& evaluate(const Assignment& y) {
    auto it = records_.find(y);
    if (it != records_.end()) {
      trace_.push_back({iteration, y.to_string(), it->second.h, it->second.value, it->second.refine_changed, true, elapsed()});
      return it->second;
    }
    EvalRecord rec;
    auto ev = evaluate_assignment(inst_, y, cache_);
    rec.h = ev.h;
    if (opt_.use_refine) {
      auto r = refine(inst_, ev.plan, y, cache_);
      rec.value = r.h;
      rec.refined_y = r.y;
      rec.plan = std::move(r.plan);
      rec.refine_changed = r.changed;
    } else {
      rec.value = ev.h;
      rec.refined_y = y;
      rec.plan = std::move(ev.plan);
    }
    rec.order = order_.size();
    order_.push_back(y);
    const bool better = order_.size() == 1 || rec.value > incumbent_value();
    auto& stored = records_.emplace(y, std::move(rec)).first->second;
    if (better) incumbent_ = order_.size() - 1;
    trace_.push_back({iteration, y.to_string(), stored.h, stored.value, stored.refine_changed, false, elapsed()});
    return stored;
  }

 private:
  const Instance& inst_;
  SearchOptions opt_;
  SingleShipCache cache_;
  std::chrono::steady_clock::time_point start_;
  std::unordered_map<Assignment, EvalRecord, AssignmentHash> records_;
  std::vector<Assignment> order_;
  std::size_t incumbent_ = 0;
  std::vector<TraceRecord> trace_;
};

struct SearchResult {
  Assignment best;
  double value = 0.0;
  FleetPlan plan;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
  bool verified_local_optimum = false;
  std::vector<TraceRecord> trace;
  std::vector<double> incumbent_history;  // incumbent value after each iteration
  // Per iteration: the samples drawn and how many visited assignments (in
  // evaluation order) and which incumbent the sampling region was built from.
  struct Batch {
    std::vector<Assignment> samples;
    std::size_t visited_before = 0;
    Assignment incumbent_before;
    bool degraded = false;
  };
  std::vector<Batch> batches;
  std::size_t degraded_batches = 0;
};

inline bool is_local_optimum(SearchState& st, const Assignment& y) {
  const double v = st.evaluate(y).value;
  for (std::size_t d = 0; d < y.digits(); ++d) {
    Assignment z = y;
    z.flip(d);
    if (st.evaluate(z).value > v) return false;
  }
  return true;
}

inline SearchResult finish(SearchState& st, SearchResult res, const Assignment& best) {
  const auto& rec = st.record(best);
  res.best = best;
  res.value = rec.value;
  res.plan = rec.plan;
  res.evaluations = st.visit_order().size();
  res.trace = st.trace();
  return res;
}

// First-improvement local search over single-digit flips, ship-major order.
inline SearchResult neighborhood_search(SearchState& st, const Assignment& y0) {
  SearchResult res;
  Assignment cur = y0;
  double cur_v = st.evaluate(cur).value;
  res.incumbent_history.push_back(cur_v);
  bool moved = true;
  while (moved) {
    moved = false;
    ++st.iteration;
    ++res.iterations;
    for (std::size_t d = 0; d < cur.digits(); ++d) {
      if (st.out_of_time()) {
        res.budget_exhausted = true;
        return finish(st, std::move(res), cur);
      }
      Assignment z = cur;
      z.flip(d);
      const double v = st.evaluate(z).value;
      if (v > cur_v) {
        cur = z;
        cur_v = v;
        moved = true;
        res.incumbent_history.push_back(cur_v);
        break;
      }
    }
  }
  res.verified_local_optimum = true;  // the last scan found no improving flip
  return finish(st, std::move(res), cur);
}

inline SearchResult neighborhood_search(const Instance& inst, const Assignment& y0, const SearchOptions& opt = {}) {
  SearchState st(inst, opt);
  return neighborhood_search(st, y0);
}

// Membership in the most promising area: y is at least as close to the
// incumbent as to every other visited assignment.
inline bool mpa_contains(const Assignment& y, const Assignment& incumbent, const std::vector<Assignment>& visited) {
  const std::size_t d0 = hamming(y, incumbent);
  if (d0 == 0) return true;
  for (const auto& z : visited) {
    if (z == incumbent) continue;
    if (hamming(y, z) < d0) return false;
  }
  return true;
}

struct SampleBatch {
  std::vector<Assignment> samples;
  bool degraded = false;
  std::size_t attempts = 0;
};

// m independent draws from the most promising area. Rejection sampling over
// the whole space is exact; when it needs more than 1000*m attempts the rest of
// the batch comes from flipping j random digits of the incumbent, j = 1, 2, ...
inline SampleBatch sample_mpa(const Assignment& incumbent, const std::vector<Assignment>& visited, std::size_t m, Rng& rng) {
  SampleBatch out;
  const std::size_t D = incumbent.digits();
  const std::size_t cap = 1000 * m;
  auto uniform_bits = [&]() {
    Assignment a(incumbent.ships(), incumbent.customers());
    for (std::size_t d = 0; d < D; ++d) a.set_digit(d, rng.next() >> 63);
    return a;
  };
  while (out.samples.size() < m && out.attempts < cap) {
    ++out.attempts;
    Assignment a = uniform_bits();
    if (mpa_contains(a, incumbent, visited)) out.samples.push_back(std::move(a));
  }
  if (out.samples.size() == m) return out;
  out.degraded = true;
  constexpr std::size_t kTriesPerRadius = 32;
  while (out.samples.size() < m) {
    bool found = false;
    for (std::size_t j = 1; j <= D && !found; ++j) {
      for (std::size_t t = 0; t < kTriesPerRadius && !found; ++t) {
        Assignment a = incumbent;
        // j distinct digits by partial Fisher-Yates
        std::vector<std::size_t> idx(D);
        for (std::size_t i = 0; i < D; ++i) idx[i] = i;
        for (std::size_t i = 0; i < j; ++i) {
          std::swap(idx[i], idx[i + rng.below(D - i)]);
          a.flip(idx[i]);
        }
        if (mpa_contains(a, incumbent, visited)) {
          out.samples.push_back(std::move(a));
          found = true;
        }
      }
    }
    if (!found) out.samples.push_back(incumbent);
  }
  return out;
}

// The most promising area is just the incumbent once every single-flip
// neighbour has been visited (any other point is strictly closer to one of them).
inline bool mpa_is_singleton(const SearchState& st) {
  const Assignment& inc = st.incumbent();
  for (std::size_t d = 0; d < inc.digits(); ++d) {
    Assignment z = inc;
    z.flip(d);
    if (!st.visited(z)) return false;
  }
  return true;
}

inline SearchResult mpas_search(SearchState& st, const Assignment& y0) {
  const auto& opt = st.options();
  SearchResult res;
  Rng rng(opt.seed);
  st.evaluate(y0);
  res.incumbent_history.push_back(st.incumbent_value());
  std::size_t stall = 0;
  while (stall < opt.stagnation && res.iterations < opt.max_iterations) {
    if (st.out_of_time()) {
      res.budget_exhausted = true;
      break;
    }
    if (mpa_is_singleton(st)) {
      res.verified_local_optimum = true;
      break;
    }
    ++st.iteration;
    ++res.iterations;
    SearchResult::Batch batch;
    batch.visited_before = st.visit_order().size();
    batch.incumbent_before = st.incumbent();
    auto drawn = sample_mpa(st.incumbent(), st.visit_order(), opt.m, rng);
    batch.samples = drawn.samples;
    batch.degraded = drawn.degraded;
    if (drawn.degraded) ++res.degraded_batches;
    const Assignment before = st.incumbent();
    for (const auto& y : drawn.samples) {
      if (st.out_of_time()) {
        res.budget_exhausted = true;
        break;
      }
      st.evaluate(y);
    }
    res.batches.push_back(std::move(batch));
    res.incumbent_history.push_back(st.incumbent_value());
    if (st.incumbent() == before) ++stall;
    else stall = 0;
    if (res.budget_exhausted) break;
  }
  if (!res.verified_local_optimum && !res.budget_exhausted) res.verified_local_optimum = mpa_is_singleton(st);
  return finish(st, std::move(res), st.incumbent());
}

inline SearchResult mpas_search(const Instance& inst, const Assignment& y0, const SearchOptions& opt = {}) {
  SearchState st(inst, opt);
  return mpas_search(st, y0);
}

// MPAS from `y0`, then a neighbourhood-search pass from its incumbent on the
// same state, so the returned assignment is a verified local optimum unless the
// budget ran out.
inline SearchResult solve_fleet(SearchState& st, const Assignment& y0) {
  auto mp = mpas_search(st, y0);
  if (mp.budget_exhausted) return mp;
  auto ns = neighborhood_search(st, mp.best);
  ns.iterations += mp.iterations;
  ns.batches = std::move(mp.batches);
  ns.degraded_batches = mp.degraded_batches;
  return ns;
}

inline SearchResult solve_fleet(const Instance& inst, const SearchOptions& opt = {}) {
  SearchState st(inst, opt);
  return solve_fleet(st, Assignment(inst.ship_count(), inst.customer_count()));
}

}  // namespace fleetopt
