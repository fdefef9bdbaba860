#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "fleetopt/core/verify.hpp"
#include "fleetopt/harness/ablation.hpp"
#include "fleetopt/harness/bench.hpp"
#include "fleetopt/harness/generator.hpp"
#include "fleetopt/harness/io.hpp"
#include "fleetopt/harness/rounding.hpp"
#include "fleetopt/search/search.hpp"

using namespace fleetopt;

namespace {

Instance seven_port() { return load_instance(FLEETOPT_DATA_DIR "/seven_port.inst"); }

Instance parse(const std::string& text) {
  std::istringstream is(text);
  return read_instance(is);
}

std::string emit(const Instance& inst) {
  std::ostringstream os;
  write_instance(os, inst);
  return os.str();
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

const char* kShipLine =
    "ship 1 lightweight_t 500 deadweight_t 2000 fuel_capacity_t 1500 min_bunker_fraction 0.05 safety_fraction 0.05 "
    "consumption_const 7.55e-7 charter_revenue 100000 cycle_deadline_h 168 speed_min_kn 14 speed_max_kn 24\n";

}  // namespace

TEST(LoadInstance, SevenPortExamplePortTwo) {
  const auto inst = seven_port();
  ASSERT_EQ(inst.port_count(), 7u);
  const Port& p = inst.port(1);
  EXPECT_EQ(p.coords, (Point2{-800.0, 200.0}));
  EXPECT_EQ(p.pickup_demand, 3600.0);
  EXPECT_EQ(p.pickup_revenue, 127.0);
  EXPECT_EQ(p.window_close, 120.0);
  EXPECT_EQ(p.prices.base_price(), 629.0);
  EXPECT_EQ(inst.port(0).prices.base_price(), 677.5);
}

TEST(LoadInstance, RoundTripIsIdentical) {
  for (const auto& inst : {seven_port(), generate_instance(17, 8, 3)}) {
    const std::string text = emit(inst);
    const auto back = parse(text);
    EXPECT_EQ(back.ports(), inst.ports());
    EXPECT_EQ(back.ships(), inst.ships());
    EXPECT_EQ(back.cargo_unit_weight(), inst.cargo_unit_weight());
    EXPECT_EQ(emit(back), text);
  }
}

TEST(LoadInstance, ExplicitDistancesRoundTrip) {
  const std::string text = std::string("fleetopt-instance 1\ncargo_unit_weight_t_per_teu 0.3\n") +
                           "port 1 x_nm 0 y_nm 0 prices 650:inf\nport 2 x_nm 1 y_nm 1 prices 600:250,550:inf\n" +
                           kShipLine + "distances_nm\n0 300\n300 0\nend\n";
  const auto inst = parse(text);
  EXPECT_TRUE(inst.has_explicit_distances());
  EXPECT_EQ(inst.distance(0, 1), 300.0);
  EXPECT_EQ(inst.port(1).prices.size(), 2u);
  EXPECT_EQ(emit(parse(emit(inst))), emit(inst));
}

TEST(LoadInstance, Errors) {
  const std::string head = "fleetopt-instance 1\ncargo_unit_weight_t_per_teu 0.3\n";
  EXPECT_NE(error_of(head + "port 2 x_nm 1 y_nm 1 prices 600:inf\n" + kShipLine + "end\n").find("depot must be port 1"),
            std::string::npos);
  const std::string asym = head + "port 1 x_nm 0 y_nm 0 prices 650:inf\nport 2 x_nm 1 y_nm 1 prices 600:inf\n" +
                           kShipLine + "distances_nm\n0 300\n310 0\nend\n";
  EXPECT_NE(error_of(asym).find("symmetric"), std::string::npos) << error_of(asym);
  const std::string unknown = head + "port 1 x_nm 0 y_nm 0 colour red prices 650:inf\n" + kShipLine + "end\n";
  const std::string msg = error_of(unknown);
  EXPECT_NE(msg.find("colour"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  const std::string missing = head + "port 1 x_nm 0 prices 650:inf\nport 2 x_nm 1 y_nm 1 prices 600:inf\n" + kShipLine + "end\n";
  EXPECT_NE(error_of(missing).find("y_nm"), std::string::npos);
  const std::string bad_num = head + "port 1 x_nm zero y_nm 0 prices 650:inf\n" + kShipLine + "end\n";
  EXPECT_NE(error_of(bad_num).find("x_nm"), std::string::npos);
  EXPECT_NE(error_of(head + "port 1 x_nm 0 y_nm 0 prices 650:inf\nport 2 x_nm 1 y_nm 1 prices 600:inf\n" + kShipLine)
                .find("end"),
            std::string::npos);
  EXPECT_THROW(load_instance("/nonexistent/file.inst"), ValidationError);
}

TEST(Generator, DeterministicAndValid) {
  const auto a = emit(generate_instance(99, 9, 3));
  EXPECT_EQ(a, emit(generate_instance(99, 9, 3)));
  EXPECT_NE(a, emit(generate_instance(100, 9, 3)));
  for (std::uint64_t seed = 0; seed < 50; ++seed) EXPECT_NO_THROW(parse(emit(generate_instance(seed, 6, 2))));
}

TEST(Generator, RangesOverManyDraws) {
  std::size_t draws = 0, zeros = 0;
  for (std::uint64_t seed = 0; draws < 10000; ++seed) {
    const auto inst = generate_instance(seed, 11, 1);
    for (std::size_t i = 1; i < inst.port_count(); ++i, ++draws) {
      const Port& p = inst.port(i);
      for (double q : {p.delivery_demand, p.pickup_demand}) {
        if (q == 0.0) ++zeros;
        else EXPECT_TRUE(q >= 2000.0 && q <= 4000.0) << q;
      }
      for (double r : {p.delivery_revenue, p.pickup_revenue}) EXPECT_TRUE(r >= 90.0 && r <= 160.0) << r;
      EXPECT_TRUE(p.prices.base_price() >= 600.0 && p.prices.base_price() <= 700.0);
      EXPECT_TRUE(p.window_close >= 40.0 && p.window_close <= 170.0);
      EXPECT_TRUE(std::fabs(p.coords.x) <= 1000.0 && std::fabs(p.coords.y) <= 1000.0);
    }
  }
  const double frac = static_cast<double>(zeros) / (2.0 * static_cast<double>(draws));
  EXPECT_NEAR(frac, GeneratorConfig{}.zero_demand_prob, 0.02);
  const Ship s = generate_instance(1, 3, 1).ship(0);
  EXPECT_EQ(s.fuel_capacity, 1500.0);
  EXPECT_EQ(s.speed_min, 14.0);
  EXPECT_EQ(s.speed_max, 24.0);
  EXPECT_EQ(s.consumption_const, 7.55e-7);
  EXPECT_NEAR((s.deadweight - s.lightweight) / kDefaultUnitWeight, 5000.0, 1e-9);
}

TEST(PlanFile, RoundTripAndVerifyCorruption) {
  const auto inst = generate_instance(21, 6, 2);
  const auto r = solve_fleet(inst);
  std::ostringstream os;
  write_plan(os, r.plan);
  std::istringstream is(os.str());
  const auto back = read_plan(is);
  EXPECT_EQ(back, r.plan);
  EXPECT_TRUE(evaluate_fleet_plan(inst, back).feasible());

  std::size_t k = 0;
  while (r.plan.plans[k].chartered) ++k;
  auto bad = back;
  bad.plans[k].visits[0].bunker_amount = 1600.0;
  bad.plans[k].visits[0].bunker_flag = true;
  derive_states(inst, k, bad.plans[k]);
  finalize_profits(bad, inst);
  const auto rep = evaluate_fleet_plan(inst, bad);
  ASSERT_TRUE(rep.has(ViolationKind::fuel_capacity));
  EXPECT_STREQ(violation_constraint(ViolationKind::fuel_capacity), "(17)");

  auto tampered = back;
  tampered.total_profit += 1234.5;
  const auto rep2 = evaluate_fleet_plan(inst, tampered);
  ASSERT_EQ(rep2.violations.size(), 1u);
  EXPECT_EQ(rep2.violations[0].kind, ViolationKind::profit_mismatch);
  EXPECT_NE(rep2.violations[0].describe().find("profit-mismatch"), std::string::npos);
}

TEST(Ablation, WeightIrrelevantWithoutCargo) {
  GeneratorConfig cfg;
  cfg.zero_demand_prob = 1.0;
  const auto inst = generate_instance(5, 5, 2, cfg);
  const auto e = run_ablation(inst, AblationKind::weight, {});
  EXPECT_FALSE(e.excluded);
  EXPECT_NEAR(e.loss, 0.0, 1e-12);
}

TEST(Ablation, PriceIrrelevantWhenAlreadyUniform) {
  GeneratorConfig cfg;
  cfg.price_lo = cfg.price_hi = 650.0;
  cfg.tier_breaks.clear();
  cfg.tier_discounts.clear();
  const auto inst = generate_instance(6, 6, 2, cfg);
  const auto e = run_ablation(inst, AblationKind::price, {});
  EXPECT_FALSE(e.excluded);
  EXPECT_NEAR(e.loss, 0.0, 1e-12);
}

TEST(Ablation, SevenPortExampleLosesProfitUnderBothAblations) {
  const auto inst = seven_port();
  for (auto kind : {AblationKind::weight, AblationKind::price}) {
    const auto e = run_ablation(inst, kind, {});
    ASSERT_FALSE(e.excluded) << ablation_name(kind);
    EXPECT_GT(e.loss, 0.0) << ablation_name(kind);
    EXPECT_TRUE(evaluate_fleet_plan(inst, e.ablated_plan).feasible());
    EXPECT_TRUE(evaluate_fleet_plan(inst, e.full_plan).feasible());
  }
}

TEST(Ablation, LossesNeverNegative) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto inst = generate_instance(seed, 6, 2);
    for (auto kind : {AblationKind::weight, AblationKind::price}) {
      const auto e = run_ablation(inst, kind, {});
      if (!e.excluded) EXPECT_GE(e.loss, -1e-6);
    }
  }
}

TEST(Bench, RowCountAndCsv) {
  BenchConfig cfg;
  cfg.sizes = {3, 4};
  cfg.seeds = {1, 2, 3};
  const auto rows = run_bench(cfg);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.oracle_status, OracleStatus::full);
    EXPECT_GE(r.mpas_profit, r.oracle_profit * (1.0 - 0.02));
  }
  std::ostringstream os;
  write_bench_csv(os, rows);
  const std::string s = os.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), rows.size() + 1);
  const auto pts = scaling_series(rows);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].runs, 3u);
}

TEST(Bench, OracleAbsentBeyondCaps) {
  BenchConfig cfg;
  cfg.sizes = {7};
  cfg.seeds = {1};
  const auto rows = run_bench(cfg);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].oracle_status, OracleStatus::absent);
  EXPECT_FALSE(rows[0].note.empty());
  EXPECT_GT(rows[0].mpas_profit, 0.0);
}

TEST(Rounding, IntegerQuantitiesStayClean) {
  const auto inst = generate_instance(8, 6, 2);
  const auto r = solve_fleet(inst);
  std::size_t kept = 0;
  const auto rounded = round_quantities(inst, r.plan, &kept);
  EXPECT_TRUE(evaluate_fleet_plan(inst, rounded).feasible());
  for (const auto& sp : rounded.plans)
    for (const auto& v : sp.visits) {
      if (kept) break;
      EXPECT_EQ(v.delivery_qty, std::floor(v.delivery_qty));
      EXPECT_EQ(v.pickup_qty, std::floor(v.pickup_qty));
    }
  EXPECT_LE(rounded.total_profit, r.plan.total_profit + 1e-6);
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(kInf), "inf");
  EXPECT_EQ(format_number(7.55e-7), "7.55e-07");
  const double x = 131540.40000000002;
  EXPECT_EQ(std::stod(format_number(x)), x);
}
