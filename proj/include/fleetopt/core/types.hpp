#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fleetopt {

// Raised when an input breaks a documented invariant. `field` names the
// offending item, `line` is the source line when parsed from a file (0 otherwise).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, std::string message, std::size_t line = 0)
      : std::runtime_error(format(field, message, line)),
        field_(std::move(field)),
        line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, const std::string& message,
                            std::size_t line) {
    std::string out = field + ": " + message;
    if (line > 0) out += " (line " + std::to_string(line) + ")";
    return out;
  }

  std::string field_;
  std::size_t line_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Absolute slack used by every feasibility check on fuel (t), weight (t) and time (h).
inline constexpr double kFeasTol = 1e-6;

struct PriceTier {
  double unit_price = 0.0;   // currency per ton
  double upper_break = kInf; // ton
  bool operator==(const PriceTier&) const = default;
};

// Incremental quantity discount schedule: every ton inside tier k is charged at
// tier k's unit price, so the cost is concave and piecewise linear.
class PriceSchedule {
 public:
  PriceSchedule() : tiers_{{0.0, kInf}} {}

  explicit PriceSchedule(std::vector<PriceTier> tiers) : tiers_(std::move(tiers)) {
    if (tiers_.empty()) throw ValidationError("price_tiers", "at least one tier required");
    for (std::size_t k = 0; k < tiers_.size(); ++k) {
      if (!(tiers_[k].unit_price >= 0.0) || !std::isfinite(tiers_[k].unit_price))
        throw ValidationError("price_tiers", "unit price must be finite and >= 0");
      if (k > 0 && tiers_[k].unit_price > tiers_[k - 1].unit_price)
        throw ValidationError("price_tiers", "unit prices must be non-increasing");
      const bool last = k + 1 == tiers_.size();
      if (last && std::isfinite(tiers_[k].upper_break))
        throw ValidationError("price_tiers", "final tier must be unbounded");
      if (!last && !(tiers_[k].upper_break > (k ? tiers_[k - 1].upper_break : 0.0)))
        throw ValidationError("price_tiers", "breakpoints must be positive and strictly increasing");
    }
  }

  static PriceSchedule flat(double unit_price) {
    return PriceSchedule({{unit_price, kInf}});
  }

  // Breakpoints as `lower, upper` per tier.
  double tier_lower(std::size_t k) const { return k == 0 ? 0.0 : tiers_[k - 1].upper_break; }
  double tier_upper(std::size_t k) const { return tiers_[k].upper_break; }

  const std::vector<PriceTier>& tiers() const noexcept { return tiers_; }
  std::size_t size() const noexcept { return tiers_.size(); }
  double base_price() const noexcept { return tiers_.front().unit_price; }
  double cheapest_price() const noexcept { return tiers_.back().unit_price; }

  bool operator==(const PriceSchedule&) const = default;

 private:
  std::vector<PriceTier> tiers_;
};

struct Point2 {
  double x = 0.0;  // nautical miles
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

struct Port {
  Point2 coords;
  double delivery_demand = 0.0;   // TEU
  double pickup_demand = 0.0;     // TEU
  double delivery_revenue = 0.0;  // currency / TEU
  double pickup_revenue = 0.0;    // currency / TEU
  double window_open = 0.0;       // h
  double window_close = kInf;     // h
  double processing_time = 10.0;  // h
  PriceSchedule prices;

  bool operator==(const Port&) const = default;
};

struct Ship {
  double lightweight = 0.0;         // t
  double deadweight = 0.0;          // t
  double fuel_capacity = 0.0;       // t
  double min_bunker_fraction = 0.0; // fraction of fuel_capacity
  double safety_fraction = 0.0;     // fraction of fuel_capacity
  double consumption_const = 0.0;   // t / (t * knot^2 * nm)
  double charter_revenue = 0.0;     // currency
  double cycle_deadline = kInf;     // h
  double speed_min = 0.0;           // knots
  double speed_max = 0.0;           // knots

  double min_bunker() const noexcept { return min_bunker_fraction * fuel_capacity; }
  double safety_level() const noexcept { return safety_fraction * fuel_capacity; }

  bool operator==(const Ship&) const = default;
};

inline void validate_port(const Port& p, std::size_t index, bool depot) {
  const std::string f = "port " + std::to_string(index + 1);
  auto finite_nonneg = [&](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError(f + "." + name, "must be finite and >= 0");
  };
  finite_nonneg(p.delivery_demand, "delivery_demand");
  finite_nonneg(p.pickup_demand, "pickup_demand");
  finite_nonneg(p.delivery_revenue, "delivery_revenue");
  finite_nonneg(p.pickup_revenue, "pickup_revenue");
  finite_nonneg(p.processing_time, "processing_time");
  if (!std::isfinite(p.window_open)) throw ValidationError(f + ".window_open", "must be finite");
  if (!(p.window_open <= p.window_close))
    throw ValidationError(f + ".window_close", "window_open must not exceed window_close");
  if (depot && (p.delivery_demand != 0.0 || p.pickup_demand != 0.0))
    throw ValidationError(f, "depot must have zero demands");
}

inline void validate_ship(const Ship& s, std::size_t index) {
  const std::string f = "ship " + std::to_string(index + 1);
  if (!(s.lightweight > 0.0 && s.lightweight < s.deadweight))
    throw ValidationError(f + ".deadweight", "require 0 < lightweight < deadweight");
  if (!(s.safety_fraction >= 0.0 && s.safety_fraction < 1.0))
    throw ValidationError(f + ".safety_fraction", "require 0 <= safety_fraction < 1");
  if (!(s.min_bunker_fraction > 0.0 && s.min_bunker_fraction <= 1.0))
    throw ValidationError(f + ".min_bunker_fraction", "require 0 < min_bunker_fraction <= 1");
  if (!(s.speed_min > 0.0 && s.speed_min <= s.speed_max && std::isfinite(s.speed_max)))
    throw ValidationError(f + ".speed_min", "require 0 < speed_min <= speed_max");
  if (!(s.fuel_capacity > 0.0 && std::isfinite(s.fuel_capacity)))
    throw ValidationError(f + ".fuel_capacity", "must be > 0");
  if (!(s.consumption_const > 0.0 && std::isfinite(s.consumption_const)))
    throw ValidationError(f + ".consumption_const", "must be > 0");
  if (!std::isfinite(s.charter_revenue))
    throw ValidationError(f + ".charter_revenue", "must be finite");
  if (!(s.cycle_deadline > 0.0)) throw ValidationError(f + ".cycle_deadline", "must be > 0");
}

// Immutable world description. Port 0 (id 1 in files) is the depot.
class Instance {
 public:
  Instance(std::vector<Port> ports, std::vector<Ship> ships, double cargo_unit_weight,
           std::vector<std::vector<double>> explicit_distances = {})
      : ports_(std::move(ports)),
        ships_(std::move(ships)),
        cargo_unit_weight_(cargo_unit_weight),
        explicit_(!explicit_distances.empty()) {
    if (ports_.size() < 2) throw ValidationError("ports", "need at least the depot and one customer port");
    if (ships_.empty()) throw ValidationError("ships", "need at least one ship");
    if (!(cargo_unit_weight_ >= 0.0) || !std::isfinite(cargo_unit_weight_))
      throw ValidationError("cargo_unit_weight", "must be finite and >= 0");
    for (std::size_t i = 0; i < ports_.size(); ++i) validate_port(ports_[i], i, i == 0);
    for (std::size_t k = 0; k < ships_.size(); ++k) validate_ship(ships_[k], k);
    const std::size_t n = ports_.size();
    if (explicit_) {
      dist_ = std::move(explicit_distances);
      if (dist_.size() != n) throw ValidationError("distances", "matrix must be N x N");
      for (auto& row : dist_)
        if (row.size() != n) throw ValidationError("distances", "matrix must be N x N");
    } else {
      dist_.assign(n, std::vector<double>(n, 0.0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          dist_[i][j] = std::hypot(ports_[i].coords.x - ports_[j].coords.x,
                                   ports_[i].coords.y - ports_[j].coords.y);
    }
    validate_distances();
  }

  std::size_t port_count() const noexcept { return ports_.size(); }
  std::size_t customer_count() const noexcept { return ports_.size() - 1; }
  std::size_t ship_count() const noexcept { return ships_.size(); }
  const std::vector<Port>& ports() const noexcept { return ports_; }
  const std::vector<Ship>& ships() const noexcept { return ships_; }
  const Port& port(std::size_t i) const { return ports_.at(i); }
  const Ship& ship(std::size_t k) const { return ships_.at(k); }
  double cargo_unit_weight() const noexcept { return cargo_unit_weight_; }
  bool has_explicit_distances() const noexcept { return explicit_; }
  const std::vector<std::vector<double>>& distance_matrix() const noexcept { return dist_; }

  double distance(std::size_t i, std::size_t j) const { return dist_.at(i).at(j); }

 private:
  void validate_distances() const {
    const std::size_t n = dist_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (dist_[i][i] != 0.0) throw ValidationError("distances", "diagonal must be zero");
      for (std::size_t j = 0; j < n; ++j) {
        const double d = dist_[i][j];
        if (!std::isfinite(d) || d < 0.0) throw ValidationError("distances", "entries must be finite and >= 0");
        if (d != dist_[j][i]) throw ValidationError("distances", "matrix must be symmetric");
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (dist_[i][k] > dist_[i][j] + dist_[j][k] + 1e-9 * (1.0 + dist_[i][k]))
            throw ValidationError("distances", "triangle inequality violated at (" + std::to_string(i + 1) + "," +
                                                   std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
  }

  std::vector<Port> ports_;
  std::vector<Ship> ships_;
  double cargo_unit_weight_;
  bool explicit_;
  std::vector<std::vector<double>> dist_;
};

inline double distance(const Instance& inst, std::size_t i, std::size_t j) { return inst.distance(i, j); }

// K x (N-1) binary matrix stored as packed 64-bit words in ship-major digit order.
// Digit k*(N-1)+i is set iff customer port i+1 (0-based port index i+1) is served by ship k.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::size_t ships, std::size_t customers)
      : ships_(ships), customers_(customers), words_((ships * customers + 63) / 64, 0) {}

  static Assignment from_string(const std::string& bits, std::size_t ships, std::size_t customers) {
    if (bits.size() != ships * customers) throw ValidationError("assignment", "expected " + std::to_string(ships * customers) + " digits");
    Assignment a(ships, customers);
    for (std::size_t d = 0; d < bits.size(); ++d) {
      if (bits[d] != '0' && bits[d] != '1') throw ValidationError("assignment", "digits must be 0 or 1");
      a.set_digit(d, bits[d] == '1');
    }
    return a;
  }

  std::size_t ships() const noexcept { return ships_; }
  std::size_t customers() const noexcept { return customers_; }
  std::size_t digits() const noexcept { return ships_ * customers_; }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  bool digit(std::size_t d) const { return (words_[d >> 6] >> (d & 63)) & 1u; }
  void set_digit(std::size_t d, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (d & 63);
    if (v) words_[d >> 6] |= m; else words_[d >> 6] &= ~m;
  }
  void flip(std::size_t d) { words_[d >> 6] ^= std::uint64_t{1} << (d & 63); }

  bool get(std::size_t ship, std::size_t customer) const { return digit(ship * customers_ + customer); }
  void set(std::size_t ship, std::size_t customer, bool v) { set_digit(ship * customers_ + customer, v); }

  // Port indices (0-based, depot = 0) assigned to `ship`, ascending.
  std::vector<std::size_t> ports_of(std::size_t ship) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < customers_; ++i)
      if (get(ship, i)) out.push_back(i + 1);
    return out;
  }

  std::string to_string() const {
    std::string s(digits(), '0');
    for (std::size_t d = 0; d < digits(); ++d) s[d] = digit(d) ? '1' : '0';
    return s;
  }

  bool operator==(const Assignment&) const = default;
  bool operator<(const Assignment& o) const { return to_string() < o.to_string(); }

 private:
  std::size_t ships_ = 0;
  std::size_t customers_ = 0;
  std::vector<std::uint64_t> words_;
};

struct AssignmentHash {
  std::size_t operator()(const Assignment& a) const noexcept {
    std::uint64_t h = 1469598103934665603ull ^ a.digits();
    for (auto w : a.words()) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// How the planner charges fuel to onboard weight. `constant_departure` models an
// operator that ignores weight change: every leg burns as if the ship still had
// its depot-departure displacement (lightweight + all deliveries).
enum class WeightModel { displacement, constant_departure };

struct Visit {
  std::size_t port = 0;        // 0-based port index
  double delivery_qty = 0.0;   // TEU
  double pickup_qty = 0.0;     // TEU
  bool bunker_flag = false;
  double bunker_amount = 0.0;  // t
  double arrival = 0.0;        // h
  double fuel_on_entry = 0.0;  // t
  double weight_on_departure = 0.0;  // t
  bool operator==(const Visit&) const = default;
};

struct Leg {
  std::size_t from = 0;
  std::size_t to = 0;
  double speed = 0.0;  // knots
  bool operator==(const Leg&) const = default;
};

// One ship's decision record. A non-chartered plan starts and ends with a
// depot visit; legs[j] connects visits[j] and visits[j+1].
struct ShipPlan {
  bool chartered = true;
  std::vector<Visit> visits;
  std::vector<Leg> legs;

  std::vector<std::size_t> customer_sequence() const {
    std::vector<std::size_t> seq;
    if (visits.size() >= 2)
      for (std::size_t j = 1; j + 1 < visits.size(); ++j) seq.push_back(visits[j].port);
    return seq;
  }

  bool operator==(const ShipPlan&) const = default;
};

struct FleetPlan {
  std::vector<ShipPlan> plans;
  std::vector<double> ship_profits;
  double total_profit = 0.0;
  bool operator==(const FleetPlan&) const = default;
};

}  // namespace fleetopt
