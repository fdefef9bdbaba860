#pragma once

// Line-oriented text formats for instances and plans.
//
// Instance file:
//   fleetopt-instance 1
//   cargo_unit_weight_t_per_teu 0.3
//   port 1 x_nm 0 y_nm 0 window_close_h 168 processing_h 0 prices 677.5:inf
//   port 2 x_nm -800 y_nm 200 delivery_teu 0 delivery_revenue_per_teu 130 ... prices 629:250,566.1:inf
//   ship 1 lightweight_t 500 deadweight_t 2000 ...
//   distances_nm            (optional, followed by N rows of N numbers)
//   end
//
// `prices` lists unit_price:upper_break pairs; the last break must be inf.
// Lines starting with '#' are comments. Numbers use the shortest form that
// round-trips exactly, so emit followed by load reproduces every bit.

#include <charconv>
#include <cstdio>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "fleetopt/core/types.hpp"

namespace fleetopt {

inline std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace io_detail {

inline double parse_number(const std::string& tok, const std::string& field, std::size_t line) {
  if (tok == "inf" || tok == "+inf") return kInf;
  if (tok == "-inf") return -kInf;
  double v = 0.0;
  const char* b = tok.data();
  const char* e = b + tok.size();
  if (!tok.empty() && *b == '+') ++b;
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e || std::isnan(v))
    throw ValidationError(field, "expected a number, got '" + tok + "'", line);
  return v;
}

inline std::size_t parse_index(const std::string& tok, const std::string& field, std::size_t line) {
  std::size_t v = 0;
  auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
    throw ValidationError(field, "expected a non-negative integer, got '" + tok + "'", line);
  return v;
}

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::istream& is) {
  std::vector<Line> out;
  std::string raw;
  std::size_t n = 0;
  while (std::getline(is, raw)) {
    ++n;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    Line l{n, {}};
    std::string t;
    while (ss >> t) l.tokens.push_back(t);
    if (!l.tokens.empty()) out.push_back(std::move(l));
  }
  return out;
}

// `<keyword> <id> key value key value ...`
class Record {
 public:
  Record(const Line& l, std::string what) : line_(l.number), what_(std::move(what)) {
    if (l.tokens.size() < 2) throw ValidationError(what_, "missing id", line_);
    id_ = parse_index(l.tokens[1], what_ + ".id", line_);
    what_ += " " + l.tokens[1];
    if ((l.tokens.size() - 2) % 2 != 0) throw ValidationError(what_, "fields must come in key value pairs", line_);
    for (std::size_t i = 2; i < l.tokens.size(); i += 2) {
      if (!fields_.emplace(l.tokens[i], l.tokens[i + 1]).second)
        throw ValidationError(what_ + "." + l.tokens[i], "duplicate field", line_);
    }
  }

  std::size_t id() const noexcept { return id_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& what() const noexcept { return what_; }

  double number(const std::string& key) {
    auto it = fields_.find(key);
    if (it == fields_.end()) throw ValidationError(what_ + "." + key, "missing field", line_);
    const double v = parse_number(it->second, what_ + "." + key, line_);
    fields_.erase(it);
    return v;
  }
  double number(const std::string& key, double fallback) {
    return fields_.count(key) ? number(key) : fallback;
  }
  std::string text(const std::string& key) {
    auto it = fields_.find(key);
    if (it == fields_.end()) throw ValidationError(what_ + "." + key, "missing field", line_);
    std::string v = it->second;
    fields_.erase(it);
    return v;
  }
  bool has(const std::string& key) const { return fields_.count(key) != 0; }

  void finish() const {
    if (!fields_.empty()) throw ValidationError(what_ + "." + fields_.begin()->first, "unknown field", line_);
  }

 private:
  std::size_t line_;
  std::string what_;
  std::size_t id_ = 0;
  std::map<std::string, std::string> fields_;
};

inline PriceSchedule parse_prices(const std::string& text, const std::string& field, std::size_t line) {
  std::vector<PriceTier> tiers;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ValidationError(field, "tier '" + item + "' must be price:upper_break", line);
    tiers.push_back({parse_number(item.substr(0, colon), field, line), parse_number(item.substr(colon + 1), field, line)});
    pos = comma + 1;
  }
  try {
    return PriceSchedule(std::move(tiers));
  } catch (const ValidationError& e) {
    throw ValidationError(field, e.what(), line);
  }
}

inline std::string format_prices(const PriceSchedule& s) {
  std::string out;
  for (const auto& t : s.tiers()) {
    if (!out.empty()) out += ',';
    out += format_number(t.unit_price) + ":" + format_number(t.upper_break);
  }
  return out;
}

inline void expect_header(const std::vector<Line>& lines, const std::string& magic) {
  if (lines.empty() || lines[0].tokens.size() != 2 || lines[0].tokens[0] != magic)
    throw ValidationError("header", "expected '" + magic + " 1'", lines.empty() ? 1 : lines[0].number);
  if (lines[0].tokens[1] != "1") throw ValidationError("header", "unsupported version " + lines[0].tokens[1], lines[0].number);
}

}  // namespace io_detail

inline void write_instance(std::ostream& os, const Instance& inst) {
  os << "fleetopt-instance 1\n";
  os << "cargo_unit_weight_t_per_teu " << format_number(inst.cargo_unit_weight()) << '\n';
  for (std::size_t i = 0; i < inst.port_count(); ++i) {
    const Port& p = inst.port(i);
    os << "port " << i + 1 << " x_nm " << format_number(p.coords.x) << " y_nm " << format_number(p.coords.y)
       << " delivery_teu " << format_number(p.delivery_demand) << " delivery_revenue_per_teu "
       << format_number(p.delivery_revenue) << " pickup_teu " << format_number(p.pickup_demand)
       << " pickup_revenue_per_teu " << format_number(p.pickup_revenue) << " window_open_h "
       << format_number(p.window_open) << " window_close_h " << format_number(p.window_close) << " processing_h "
       << format_number(p.processing_time) << " prices " << io_detail::format_prices(p.prices) << '\n';
  }
  for (std::size_t k = 0; k < inst.ship_count(); ++k) {
    const Ship& s = inst.ship(k);
    os << "ship " << k + 1 << " lightweight_t " << format_number(s.lightweight) << " deadweight_t "
       << format_number(s.deadweight) << " fuel_capacity_t " << format_number(s.fuel_capacity)
       << " min_bunker_fraction " << format_number(s.min_bunker_fraction) << " safety_fraction "
       << format_number(s.safety_fraction) << " consumption_const " << format_number(s.consumption_const)
       << " charter_revenue " << format_number(s.charter_revenue) << " cycle_deadline_h "
       << format_number(s.cycle_deadline) << " speed_min_kn " << format_number(s.speed_min) << " speed_max_kn "
       << format_number(s.speed_max) << '\n';
  }
  if (inst.has_explicit_distances()) {
    os << "distances_nm\n";
    for (const auto& row : inst.distance_matrix()) {
      for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << format_number(row[j]);
      os << '\n';
    }
  }
  os << "end\n";
}

inline Instance read_instance(std::istream& is) {
  using namespace io_detail;
  const auto lines = tokenize(is);
  expect_header(lines, "fleetopt-instance");
  std::optional<double> unit_weight;
  std::map<std::size_t, std::pair<Port, std::size_t>> ports;
  std::map<std::size_t, std::pair<Ship, std::size_t>> ships;
  std::vector<std::vector<double>> dist;
  bool ended = false;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& l = lines[li];
    const std::string& key = l.tokens[0];
    if (ended) throw ValidationError(key, "content after 'end'", l.number);
    if (key == "cargo_unit_weight_t_per_teu") {
      if (l.tokens.size() != 2) throw ValidationError(key, "expected one value", l.number);
      unit_weight = parse_number(l.tokens[1], key, l.number);
    } else if (key == "port") {
      Record r(l, "port");
      Port p;
      p.coords.x = r.number("x_nm");
      p.coords.y = r.number("y_nm");
      p.delivery_demand = r.number("delivery_teu", 0.0);
      p.delivery_revenue = r.number("delivery_revenue_per_teu", 0.0);
      p.pickup_demand = r.number("pickup_teu", 0.0);
      p.pickup_revenue = r.number("pickup_revenue_per_teu", 0.0);
      p.window_open = r.number("window_open_h", 0.0);
      p.window_close = r.number("window_close_h", kInf);
      p.processing_time = r.number("processing_h", 10.0);
      p.prices = parse_prices(r.text("prices"), r.what() + ".prices", l.number);
      r.finish();
      if (r.id() == 0) throw ValidationError("port.id", "port ids start at 1", l.number);
      if (!ports.emplace(r.id(), std::make_pair(p, l.number)).second)
        throw ValidationError(r.what(), "duplicate port id", l.number);
    } else if (key == "ship") {
      Record r(l, "ship");
      Ship s;
      s.lightweight = r.number("lightweight_t");
      s.deadweight = r.number("deadweight_t");
      s.fuel_capacity = r.number("fuel_capacity_t");
      s.min_bunker_fraction = r.number("min_bunker_fraction");
      s.safety_fraction = r.number("safety_fraction");
      s.consumption_const = r.number("consumption_const");
      s.charter_revenue = r.number("charter_revenue");
      s.cycle_deadline = r.number("cycle_deadline_h");
      s.speed_min = r.number("speed_min_kn");
      s.speed_max = r.number("speed_max_kn");
      r.finish();
      if (r.id() == 0) throw ValidationError("ship.id", "ship ids start at 1", l.number);
      if (!ships.emplace(r.id(), std::make_pair(s, l.number)).second)
        throw ValidationError(r.what(), "duplicate ship id", l.number);
    } else if (key == "distances_nm") {
      const std::size_t n = ports.size();
      if (n == 0) throw ValidationError(key, "must follow the port lines", l.number);
      for (std::size_t i = 0; i < n; ++i) {
        if (++li >= lines.size()) throw ValidationError(key, "expected " + std::to_string(n) + " rows", l.number);
        const Line& row = lines[li];
        if (row.tokens.size() != n)
          throw ValidationError(key, "row " + std::to_string(i + 1) + " needs " + std::to_string(n) + " entries", row.number);
        std::vector<double> r;
        for (const auto& t : row.tokens) r.push_back(parse_number(t, key, row.number));
        dist.push_back(std::move(r));
      }
    } else if (key == "end") {
      ended = true;
    } else {
      throw ValidationError(key, "unknown keyword", l.number);
    }
  }
  if (!ended) throw ValidationError("end", "missing 'end' line", lines.back().number);
  if (!unit_weight) throw ValidationError("cargo_unit_weight_t_per_teu", "missing field");
  if (ports.empty() || ports.begin()->first != 1) throw ValidationError("port", "depot must be port 1");
  std::vector<Port> pv;
  std::vector<Ship> sv;
  for (auto& [id, entry] : ports) {
    if (id != pv.size() + 1) throw ValidationError("port " + std::to_string(pv.size() + 1), "port ids must be consecutive");
    try {
      validate_port(entry.first, pv.size(), pv.empty());
    } catch (const ValidationError& e) {
      throw ValidationError(e.field(), std::string(e.what()).substr(e.field().size() + 2), entry.second);
    }
    pv.push_back(entry.first);
  }
  for (auto& [id, entry] : ships) {
    if (id != sv.size() + 1) throw ValidationError("ship " + std::to_string(sv.size() + 1), "ship ids must be consecutive");
    try {
      validate_ship(entry.first, sv.size());
    } catch (const ValidationError& e) {
      throw ValidationError(e.field(), std::string(e.what()).substr(e.field().size() + 2), entry.second);
    }
    sv.push_back(entry.first);
  }
  return Instance(std::move(pv), std::move(sv), *unit_weight, std::move(dist));
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open file");
  return read_instance(in);
}

inline void save_instance(const std::string& path, const Instance& inst) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ValidationError(path, "cannot write file");
    write_instance(out, inst);
  }
  std::rename(tmp.c_str(), path.c_str());
}

// Plan file:
//   fleetopt-plan 1
//   total_profit 1234
//   ship 1 chartered 0 profit 567
//   visit 1 delivery_teu .. pickup_teu .. bunker 1 bunker_t .. arrival_h .. fuel_on_entry_t .. weight_on_departure_t ..
//   leg 1 to 3 speed_kn 17.5
//   end
// Ports are 1-based in the file. Visits and legs belong to the last ship line.
inline void write_plan(std::ostream& os, const FleetPlan& plan) {
  os << "fleetopt-plan 1\n";
  os << "total_profit " << format_number(plan.total_profit) << '\n';
  for (std::size_t k = 0; k < plan.plans.size(); ++k) {
    const ShipPlan& sp = plan.plans[k];
    const double profit = k < plan.ship_profits.size() ? plan.ship_profits[k] : 0.0;
    os << "ship " << k + 1 << " chartered " << (sp.chartered ? 1 : 0) << " profit " << format_number(profit) << '\n';
    for (const auto& v : sp.visits)
      os << "visit " << v.port + 1 << " delivery_teu " << format_number(v.delivery_qty) << " pickup_teu "
         << format_number(v.pickup_qty) << " bunker " << (v.bunker_flag ? 1 : 0) << " bunker_t "
         << format_number(v.bunker_amount) << " arrival_h " << format_number(v.arrival) << " fuel_on_entry_t "
         << format_number(v.fuel_on_entry) << " weight_on_departure_t " << format_number(v.weight_on_departure)
         << '\n';
    for (const auto& g : sp.legs)
      os << "leg " << g.from + 1 << " to " << g.to + 1 << " speed_kn " << format_number(g.speed) << '\n';
  }
  os << "end\n";
}

inline FleetPlan read_plan(std::istream& is) {
  using namespace io_detail;
  const auto lines = tokenize(is);
  expect_header(lines, "fleetopt-plan");
  FleetPlan plan;
  bool have_total = false, ended = false;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& l = lines[li];
    const std::string& key = l.tokens[0];
    if (ended) throw ValidationError(key, "content after 'end'", l.number);
    if (key == "total_profit") {
      if (l.tokens.size() != 2) throw ValidationError(key, "expected one value", l.number);
      plan.total_profit = parse_number(l.tokens[1], key, l.number);
      have_total = true;
    } else if (key == "ship") {
      Record r(l, "ship");
      if (r.id() != plan.plans.size() + 1) throw ValidationError(r.what(), "ship ids must be consecutive from 1", l.number);
      ShipPlan sp;
      const double c = r.number("chartered");
      if (c != 0.0 && c != 1.0) throw ValidationError(r.what() + ".chartered", "must be 0 or 1", l.number);
      sp.chartered = c == 1.0;
      plan.ship_profits.push_back(r.number("profit"));
      r.finish();
      plan.plans.push_back(std::move(sp));
    } else if (key == "visit" || key == "leg") {
      if (plan.plans.empty()) throw ValidationError(key, "must follow a ship line", l.number);
      Record r(l, key);
      if (r.id() == 0) throw ValidationError(r.what(), "port ids start at 1", l.number);
      auto& sp = plan.plans.back();
      if (key == "visit") {
        Visit v;
        v.port = r.id() - 1;
        v.delivery_qty = r.number("delivery_teu");
        v.pickup_qty = r.number("pickup_teu");
        const double b = r.number("bunker");
        if (b != 0.0 && b != 1.0) throw ValidationError(r.what() + ".bunker", "must be 0 or 1", l.number);
        v.bunker_flag = b == 1.0;
        v.bunker_amount = r.number("bunker_t");
        v.arrival = r.number("arrival_h");
        v.fuel_on_entry = r.number("fuel_on_entry_t");
        v.weight_on_departure = r.number("weight_on_departure_t");
        sp.visits.push_back(v);
      } else {
        Leg g;
        g.from = r.id() - 1;
        const double to = r.number("to");
        if (!(to >= 1.0) || to != std::floor(to)) throw ValidationError(r.what() + ".to", "must be a port id", l.number);
        g.to = static_cast<std::size_t>(to) - 1;
        g.speed = r.number("speed_kn");
        sp.legs.push_back(g);
      }
      r.finish();
    } else if (key == "end") {
      ended = true;
    } else {
      throw ValidationError(key, "unknown keyword", l.number);
    }
  }
  if (!ended) throw ValidationError("end", "missing 'end' line", lines.back().number);
  if (!have_total) throw ValidationError("total_profit", "missing field");
  return plan;
}

inline FleetPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open file");
  return read_plan(in);
}

inline void save_plan(const std::string& path, const FleetPlan& plan) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ValidationError(path, "cannot write file");
    write_plan(out, plan);
  }
  std::rename(tmp.c_str(), path.c_str());
}

}  // namespace fleetopt
