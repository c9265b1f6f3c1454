#pragma once

// Period-based cash-flow model: constant burn-rate expense lines plus a sales
// block, discounted at end of period (t = 1..T, no t = 0 flow).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anckit/common.hpp"

namespace anckit::econ {

struct ExpenseLine {
  std::string name;
  int first = 1;
  int last = 1;
  double rate = 0.0;  // per period, negative = outflow
};

struct SalesBlock {
  int first = 1;
  int last = 1;
  double units = 0.0;
  double unit_price = 0.0;
  double unit_cost = 0.0;  // <= 0
};

struct ModelSpec {
  int horizon = 1;
  double discount_rate = 0.0;
  std::vector<ExpenseLine> expenses;
  SalesBlock sales;
};

inline void validate(const ModelSpec& spec) {
  require(spec.horizon >= 1, "horizon", "must be >= 1");
  require(std::isfinite(spec.discount_rate) && spec.discount_rate > -1.0, "discount_rate",
          "must be finite and > -1");
  for (const auto& line : spec.expenses) {
    const std::string where = "expenses[" + line.name + "]";
    if (!(line.first >= 1 && line.first <= line.last && line.last <= spec.horizon)) {
      throw ValidationError(where + ".first/last",
                            "period window must satisfy 1 <= first <= last <= horizon");
    }
    if (!std::isfinite(line.rate)) throw ValidationError(where + ".rate", "must be finite");
  }
  const auto& s = spec.sales;
  require(s.first >= 1 && s.first <= s.last && s.last <= spec.horizon, "sales.first/last",
          "period window must satisfy 1 <= first <= last <= horizon");
  require(std::isfinite(s.units) && s.units >= 0.0, "sales.units", "must be finite and >= 0");
  require(std::isfinite(s.unit_price) && s.unit_price >= 0.0, "sales.unit_price",
          "must be finite and >= 0");
  require(std::isfinite(s.unit_cost) && s.unit_cost <= 0.0, "sales.unit_cost",
          "must be finite and <= 0");
}

/// C_t for t = 1..T (index t-1).
inline std::vector<double> build_cash_flows(const ModelSpec& spec) {
  validate(spec);
  std::vector<double> flows(static_cast<std::size_t>(spec.horizon), 0.0);
  for (int t = 1; t <= spec.horizon; ++t) {
    double c = 0.0;
    for (const auto& line : spec.expenses) {
      if (t >= line.first && t <= line.last) c += line.rate;
    }
    const auto& s = spec.sales;
    if (t >= s.first && t <= s.last) c += s.units * (s.unit_price + s.unit_cost);
    flows[static_cast<std::size_t>(t - 1)] = c;
  }
  return flows;
}

inline double discount_factor(double r, int t) { return std::pow(1.0 + r, t); }

inline double npv(std::span<const double> flows, double r) {
  require(std::isfinite(r) && r > -1.0, "discount_rate", "must be finite and > -1");
  double acc = 0.0;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    acc += flows[i] / discount_factor(r, static_cast<int>(i + 1));
  }
  return acc;
}

inline constexpr double kIrrLow = 0.0;
inline constexpr double kIrrHigh = 10.0;

/// Per-period internal rate of return by bisection on [0, 10]. nullopt when
/// the flows never change sign or NPV does not change sign over the bracket.
inline std::optional<double> irr(std::span<const double> flows) {
  const bool any_pos = std::any_of(flows.begin(), flows.end(), [](double c) { return c > 0; });
  const bool any_neg = std::any_of(flows.begin(), flows.end(), [](double c) { return c < 0; });
  if (!any_pos || !any_neg) return std::nullopt;

  double lo = kIrrLow, hi = kIrrHigh;
  double f_lo = npv(flows, lo);
  const double f_hi = npv(flows, hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0) == (f_hi > 0)) return std::nullopt;

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = npv(flows, mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Two-point linear interpolation of the NPV root.
inline double irr_interpolate(double ra, double rb, double npva, double npvb) {
  require(std::isfinite(ra) && std::isfinite(rb) && ra < rb, "rb", "requires ra < rb");
  require(std::isfinite(npva) && std::isfinite(npvb), "npv", "must be finite");
  require(npva != npvb, "npvb", "must differ from npva");
  return ra + npva * (rb - ra) / (npva - npvb);
}

/// Running (optionally discounted) cumulative cash flow.
inline std::vector<double> cumulative(std::span<const double> flows, double r, bool discounted) {
  std::vector<double> out(flows.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    acc += discounted ? flows[i] / discount_factor(r, static_cast<int>(i + 1)) : flows[i];
    out[i] = acc;
  }
  return out;
}

/// First period t (1-based) whose cumulative flow is >= 0.
inline std::optional<int> break_even(std::span<const double> flows, double r,
                                     bool discounted = false) {
  require(std::isfinite(r) && r > -1.0, "discount_rate", "must be finite and > -1");
  const auto cum = cumulative(flows, r, discounted);
  for (std::size_t i = 0; i < cum.size(); ++i) {
    if (cum[i] >= 0.0) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Scenarios

inline constexpr std::string_view kUnits = "UNITS";
inline constexpr std::string_view kPrice = "PRICE";
inline constexpr std::string_view kCost = "COST";

/// Maps the spreadsheet row labels onto the sales keywords; other names pass
/// through unchanged.
inline std::string canonical_target(std::string_view name) {
  if (name == "Unit Sales") return std::string(kUnits);
  if (name == "Unit Price") return std::string(kPrice);
  if (name == "Unit Production Cost") return std::string(kCost);
  return std::string(name);
}

struct Adjustment {
  std::string target;
  double pct = 0.0;  // fractional, -0.30 = -30 %
  std::optional<int> first_override;
  std::optional<int> last_override;
};

inline ModelSpec apply_adjustments(const ModelSpec& spec, std::span<const Adjustment> adjustments) {
  validate(spec);
  ModelSpec out = spec;
  for (const auto& adj : adjustments) {
    require(std::isfinite(adj.pct), "pct", "must be finite");
    const std::string target = canonical_target(adj.target);

    int* first = nullptr;
    int* last = nullptr;
    if (target == kUnits || target == kPrice || target == kCost) {
      auto& s = out.sales;
      if (target == kUnits) s.units *= 1.0 + adj.pct;
      if (target == kPrice) s.unit_price *= 1.0 + adj.pct;
      if (target == kCost) s.unit_cost *= 1.0 + adj.pct;
      first = &s.first;
      last = &s.last;
    } else {
      ExpenseLine* hit = nullptr;
      for (auto& line : out.expenses) {
        if (line.name != target) continue;
        if (hit != nullptr) {
          throw ValidationError("target", "'" + target + "' matches more than one expense line");
        }
        hit = &line;
      }
      if (hit == nullptr) throw ValidationError("target", "unknown adjustment target '" + target + "'");
      hit->rate *= 1.0 + adj.pct;
      first = &hit->first;
      last = &hit->last;
    }
    if (adj.first_override) *first = *adj.first_override;
    if (adj.last_override) *last = *adj.last_override;
    if (!(*first >= 1 && *first <= *last && *last <= out.horizon)) {
      throw ValidationError("first/last", "override for '" + target +
                                              "' must satisfy 1 <= first <= last <= horizon");
    }
  }
  return out;
}

struct LineDelta {
  std::string name;
  int first = 0;
  int last = 0;
  double base = 0.0;
  double adjusted = 0.0;
  double pct = 0.0;    // adjusted/base - 1 (0 when base is 0)
  double delta = 0.0;  // adjusted - base
};

struct EconResult {
  std::vector<double> cash_flows;
  std::vector<double> discounted;
  std::vector<double> cumulative;  // per the selected break-even mode
  double discount_rate = 0.0;
  double npv = 0.0;
  std::optional<double> irr;
  std::optional<int> break_even_period;
  bool discounted_break_even = false;
  double base_npv = 0.0;
  double delta_npv = 0.0;
  std::optional<double> delta_pct;  // undefined when the base NPV is zero
  std::vector<LineDelta> line_deltas;
};

inline std::vector<LineDelta> line_deltas(const ModelSpec& base, const ModelSpec& adjusted) {
  std::vector<LineDelta> out;
  auto row = [&](std::string name, int first, int last, double b, double a) {
    out.push_back({std::move(name), first, last, b, a, b != 0.0 ? a / b - 1.0 : 0.0, a - b});
  };
  for (std::size_t i = 0; i < adjusted.expenses.size(); ++i) {
    const auto& a = adjusted.expenses[i];
    const double b = i < base.expenses.size() ? base.expenses[i].rate : 0.0;
    row(a.name, a.first, a.last, b, a.rate);
  }
  const auto& bs = base.sales;
  const auto& as = adjusted.sales;
  row("Unit Sales", as.first, as.last, bs.units, as.units);
  row("Unit Price", as.first, as.last, bs.unit_price, as.unit_price);
  row("Unit Production Cost", as.first, as.last, bs.unit_cost, as.unit_cost);
  return out;
}

/// Evaluates `base` with `adjustments` applied and compares against `base`.
inline EconResult evaluate(const ModelSpec& base, std::span<const Adjustment> adjustments,
                           bool discounted_break_even = false) {
  const ModelSpec adjusted = apply_adjustments(base, adjustments);
  EconResult r;
  r.discount_rate = adjusted.discount_rate;
  r.cash_flows = build_cash_flows(adjusted);
  r.discounted.resize(r.cash_flows.size());
  for (std::size_t i = 0; i < r.cash_flows.size(); ++i) {
    r.discounted[i] = r.cash_flows[i] / discount_factor(adjusted.discount_rate, static_cast<int>(i + 1));
  }
  r.discounted_break_even = discounted_break_even;
  r.cumulative = cumulative(r.cash_flows, adjusted.discount_rate, discounted_break_even);
  r.npv = npv(r.cash_flows, adjusted.discount_rate);
  r.irr = irr(r.cash_flows);
  r.break_even_period = break_even(r.cash_flows, adjusted.discount_rate, discounted_break_even);
  r.base_npv = npv(build_cash_flows(base), base.discount_rate);
  r.delta_npv = r.npv - r.base_npv;
  if (r.base_npv != 0.0) r.delta_pct = r.delta_npv / r.base_npv;
  r.line_deltas = line_deltas(base, adjusted);
  return r;
}

struct SensitivityRow {
  double delta_npv = 0.0;
  std::optional<double> delta_pct;
};

inline SensitivityRow sensitivity_row(const ModelSpec& spec, std::span<const Adjustment> adjustments) {
  const double base = npv(build_cash_flows(spec), spec.discount_rate);
  const double adjusted =
      npv(build_cash_flows(apply_adjustments(spec, adjustments)), spec.discount_rate);
  SensitivityRow row;
  row.delta_npv = adjusted - base;
  if (base != 0.0) row.delta_pct = row.delta_npv / base;
  return row;
}

inline SensitivityRow sensitivity_row(const ModelSpec& spec, const Adjustment& adj) {
  return sensitivity_row(spec, std::span<const Adjustment>(&adj, 1));
}

}  // namespace anckit::econ
