#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fleetopt/core/verify.hpp"
#include "fleetopt/harness/generator.hpp"
#include "fleetopt/single_ship/loading.hpp"
#include "fleetopt/single_ship/solver.hpp"
#include "fleetopt/single_ship/speeds.hpp"
#include "instance_fixtures.hpp"

using namespace fleetopt;
using fixtures::depot_port;
using fixtures::full_task;
using fixtures::make_port;

namespace {

SpeedProblem two_legs(double d1, double d2, double w1, double w2, double total) {
  SpeedProblem sp;
  sp.distance = {d1, d2};
  sp.weight = {w1, w2};
  sp.fuel_value = {1.0, 1.0};
  sp.processing = {0.0, 0.0};
  sp.window_open = {0.0, 0.0};
  sp.window_close = {kInf, total};
  sp.consumption_const = 7.55e-7;
  sp.speed_min = 10.0;
  sp.speed_max = 30.0;
  return sp;
}

double speed_cost(const SpeedProblem& sp, const std::vector<double>& v) {
  double c = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) c += sp.fuel_value[j] * sp.consumption_const * sp.weight[j] * sp.distance[j] * v[j] * v[j];
  return c;
}

}  // namespace

TEST(OptimizeSpeeds, SingleLooseLegSailsAtMinimum) {
  SpeedProblem sp;
  sp.distance = {700.0};
  sp.weight = {900.0};
  sp.fuel_value = {1.0};
  sp.processing = {0.0};
  sp.window_open = {0.0};
  sp.window_close = {500.0};
  sp.consumption_const = 7.55e-7;
  sp.speed_min = 14.0;
  sp.speed_max = 24.0;
  const auto r = optimize_speeds(sp);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.speeds[0], 14.0, 1e-6);
}

TEST(OptimizeSpeeds, EqualWeightsBindingTimeGiveEqualSpeeds) {
  const auto sp = two_legs(400.0, 900.0, 800.0, 800.0, 1300.0 / 20.0);
  const auto r = optimize_speeds(sp);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.speeds[0], 20.0, 1e-5);
  EXPECT_NEAR(r.speeds[1], 20.0, 1e-5);
}

// Stationarity of sum C W d v^2 under sum d / v = T gives W1 v1^3 = W2 v2^3;
// the leg lengths cancel.
TEST(OptimizeSpeeds, HeavyLegBalanceMatchesGrid) {
  const double d1 = 500.0, d2 = 800.0, w2 = 700.0, w1 = 2.0 * w2;
  const auto sp = two_legs(d1, d2, w1, w2, (d1 + d2) / 18.0);
  const auto r = optimize_speeds(sp);
  ASSERT_TRUE(r.feasible);
  const double v1 = r.speeds[0], v2 = r.speeds[1];
  EXPECT_NEAR(w1 * v1 * v1 * v1, w2 * v2 * v2 * v2, 1e-6 * w1 * v1 * v1 * v1);
  EXPECT_NEAR(d1 / v1 + d2 / v2, (d1 + d2) / 18.0, 1e-6);

  // grid over v1 with v2 on the time budget (cost rises with v2, so the budget binds)
  double best = kInf, best_v1 = 0.0;
  for (double a = 10.0; a <= 30.0; a += 1e-4) {
    const double rest = (d1 + d2) / 18.0 - d1 / a;
    if (rest <= 0.0) continue;
    const double b = std::max(10.0, d2 / rest);
    if (b > 30.0) continue;
    const double c = speed_cost(sp, {a, b});
    if (c < best) {
      best = c;
      best_v1 = a;
    }
  }
  EXPECT_LE(speed_cost(sp, r.speeds), best * (1.0 + 1e-6));
  EXPECT_NEAR(v1, best_v1, 1e-3);
}

TEST(OptimizeSpeeds, InfeasibleWindowSignalled) {
  auto sp = two_legs(500.0, 500.0, 800.0, 800.0, 500.0 / 30.0);
  EXPECT_FALSE(optimize_speeds(sp).feasible);
}

TEST(EnumerateRoutes, Counts) {
  Port d = depot_port(), a = make_port(100.0, 50.0, 650.0), b = make_port(-120.0, 80.0, 650.0),
       c = make_port(60.0, -150.0, 650.0);
  const Instance inst({d, a, b, c}, {default_ship()}, 0.3);
  EXPECT_EQ(enumerate_routes(inst, 0, {2}).size(), 1u);
  EXPECT_EQ(enumerate_routes(inst, 0, {1, 2, 3}).size(), 6u);
}

TEST(EnumerateRoutes, WindowPrunesLateOrder) {
  Port d = depot_port(), a = make_port(0.0, 300.0, 650.0), b = make_port(0.0, -300.0, 650.0);
  // A first arrives at 12.5 h; after B it cannot arrive before 47.5 h
  a.window_close = 20.0;
  const Instance inst({d, a, b}, {default_ship()}, 0.3);
  const auto routes = enumerate_routes(inst, 0, {1, 2});
  ASSERT_EQ(routes.size(), 1u);
  EXPECT_EQ(routes[0], (std::vector<std::size_t>{1, 2}));
}

TEST(SolveSingleShip, EmptySetStaysAtDepot) {
  const auto inst = generate_instance(2, 4, 1);
  const auto sol = solve_single_ship(full_task(inst, 0, {}));
  EXPECT_TRUE(sol.feasible);
  EXPECT_EQ(sol.serving_profit, 0.0);
  EXPECT_TRUE(sol.plan.customer_sequence().empty());
}

// Brute force over a speed grid, a quantity grid and every bunkering pattern.
TEST(SolveSingleShip, SinglePortMatchesGridOracle) {
  Port d = depot_port(650.0), p = make_port(600.0, 0.0, 600.0);
  p.delivery_demand = 1000.0;
  p.delivery_revenue = 150.0;
  p.window_close = 600.0 / 18.0;
  Ship s = default_ship();
  s.cycle_deadline = 600.0 / 18.0 + 10.0 + 600.0 / 16.0;
  const Instance inst({d, p}, {s}, 0.3);
  const auto sol = solve_single_ship(full_task(inst, 0, {1}));
  ASSERT_TRUE(sol.feasible);
  EXPECT_TRUE(evaluate_fleet_plan(inst, FleetPlan{{sol.plan}, {sol.serving_profit}, sol.serving_profit}).feasible());

  double best = -kInf;
  for (double q = 0.0; q <= 1000.0; q += 10.0)
    for (double v1 = 14.0; v1 <= 24.0 + 1e-9; v1 += 0.01)
      for (double v2 = 14.0; v2 <= 24.0 + 1e-9; v2 += 0.01) {
        const double t1 = 600.0 / v1, t2 = t1 + 10.0 + 600.0 / v2;
        if (t1 > p.window_close + 1e-9 || t2 > s.cycle_deadline + 1e-9) continue;
        const double b1 = 600.0 * s.consumption_const * (500.0 + 0.3 * q) * v1 * v1;
        const double b2 = 600.0 * s.consumption_const * 500.0 * v2 * v2;
        const double burn = b1 + b2;
        if (burn < s.min_bunker()) continue;
        // depot only, port only, or both with each purchase at least the minimum
        double cost = std::min(650.0 * burn, 600.0 * burn);
        if (burn >= 2.0 * s.min_bunker()) cost = std::min(cost, 650.0 * s.min_bunker() + 600.0 * (burn - s.min_bunker()));
        best = std::max(best, 150.0 * q - cost);
        break;  // slowest feasible v2 is cheapest
      }
  EXPECT_NEAR(sol.serving_profit, best, 1e-3 * std::fabs(best));
}

TEST(SolveSingleShip, DeadPortStillVisitedAndCosts) {
  Port d = depot_port(650.0), a = make_port(500.0, 300.0, 640.0), dead = make_port(-300.0, 400.0, 700.0);
  a.delivery_demand = 2000.0;
  a.delivery_revenue = 140.0;
  a.pickup_demand = 1500.0;
  a.pickup_revenue = 120.0;
  const Instance inst({d, a, dead}, {default_ship()}, 0.3);
  const auto both = solve_single_ship(full_task(inst, 0, {1, 2}));
  const auto alone = solve_single_ship(full_task(inst, 0, {1}));
  ASSERT_TRUE(both.feasible);
  ASSERT_TRUE(alone.feasible);
  EXPECT_EQ(both.plan.customer_sequence().size(), 2u);
  EXPECT_LT(both.serving_profit, alone.serving_profit);
}

TEST(SolveSingleShip, FlankingSpeedsOfIdleMiddlePortAgree) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 10 && seed < 200; ++seed) {
    auto c = fixtures::flanking_instance(seed);
    if (!c) continue;
    const auto sol = solve_single_ship(full_task(c->inst, 0, {1, 2}));
    if (!sol.feasible) continue;
    const auto& v = sol.plan.visits;
    std::size_t j = 1;
    while (v[j].port != c->middle) ++j;
    ASSERT_FALSE(v[j].bunker_flag);
    const double a = sol.plan.legs[j - 1].speed, b = sol.plan.legs[j].speed;
    EXPECT_NEAR(a, b, 1e-6 * std::max(a, b)) << "seed " << seed;
    ++checked;
  }
  EXPECT_EQ(checked, 10);
}

TEST(Loading, BunkersAtCheapestVisitedPort) {
  Port d = depot_port(677.5), a = make_port(0.0, 600.0, 629.0), b = make_port(500.0, 500.0, 679.5);
  const Instance inst({d, a, b}, {default_ship()}, 0.3);
  LoadProblem lp;
  lp.inst = &inst;
  lp.route = {1, 2};
  lp.speeds = {15.0, 15.0, 15.0};
  lp.delivery_cap = {0.0, 0.0};
  lp.pickup_cap = {0.0, 0.0};
  const auto r = optimize_quantities_and_bunkering(lp);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.bunker[0], 0.0);
  EXPECT_EQ(r.bunker[2], 0.0);
  double burn = 0.0;
  const std::vector<std::size_t> stops{0, 1, 2, 0};
  for (std::size_t j = 0; j < 3; ++j) burn += leg_burn(inst, inst.ship(0), stops[j], stops[j + 1], 500.0, 15.0);
  // every ton costs at least 629, so this is the cheapest possible plan
  EXPECT_NEAR(r.bunker[1], burn, 1e-6);
  EXPECT_NEAR(r.profit, -629.0 * burn, 1e-6);
}

TEST(Loading, UnprofitableCargoLeftBehind) {
  Port d = depot_port(650.0), a = make_port(900.0, 0.0, 650.0);
  a.delivery_demand = 3000.0;
  a.delivery_revenue = 0.001;  // far below the fuel its weight costs on the outbound leg
  a.pickup_demand = 2000.0;
  a.pickup_revenue = 130.0;
  const Instance inst({d, a}, {default_ship()}, 0.3);
  LoadProblem lp;
  lp.inst = &inst;
  lp.route = {1};
  lp.speeds = {16.0, 16.0};
  lp.delivery_cap = {3000.0};
  lp.pickup_cap = {2000.0};
  const auto r = optimize_quantities_and_bunkering(lp);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.delivery[0], 0.0, 1e-9);
  EXPECT_NEAR(r.pickup[0], 2000.0, 1e-6);
}

TEST(InnerOptimize, ZeroDemandConvergesInOneRound) {
  Port d = depot_port(650.0), a = make_port(1000.0, 0.0, 640.0);
  const Instance inst({d, a}, {default_ship()}, 0.3);
  const auto r = inner_optimize(inst, 0, {1}, {0.0}, {0.0});
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.rounds, 1u);
}

TEST(InnerOptimize, ProfitTraceNonDecreasing) {
  int runs = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto inst = generate_instance(seed, 4, 1);
    std::vector<std::size_t> route{1, 2, 3};
    std::vector<double> dc, pc;
    for (auto p : route) {
      dc.push_back(inst.port(p).delivery_demand);
      pc.push_back(inst.port(p).pickup_demand);
    }
    const auto r = inner_optimize(inst, 0, route, dc, pc);
    if (!r.feasible) continue;
    ++runs;
    for (std::size_t i = 1; i < r.profit_trace.size(); ++i) EXPECT_GE(r.profit_trace[i], r.profit_trace[i - 1]);
    EXPECT_TRUE(evaluate_fleet_plan(inst, FleetPlan{{r.plan}, {r.serving_profit}, r.serving_profit}).feasible());
  }
  EXPECT_GT(runs, 0);
}

TEST(Rebunker, KeepsRouteSpeedsAndQuantities) {
  const auto inst = generate_instance(4, 4, 1);
  const auto sol = solve_single_ship(full_task(inst, 0, {1, 2}));
  if (!sol.feasible) GTEST_SKIP() << "instance has no feasible plan for {1,2}";
  std::vector<double> dq, pq, sp;
  for (std::size_t j = 1; j + 1 < sol.plan.visits.size(); ++j) {
    dq.push_back(sol.plan.visits[j].delivery_qty);
    pq.push_back(sol.plan.visits[j].pickup_qty);
  }
  for (const auto& g : sol.plan.legs) sp.push_back(g.speed);
  const auto rb = rebunker(inst, 0, sol.plan.customer_sequence(), sp, dq, pq);
  ASSERT_TRUE(rb.feasible);
  EXPECT_NEAR(rb.serving_profit, sol.serving_profit, 1e-6 * std::fabs(sol.serving_profit));
}
