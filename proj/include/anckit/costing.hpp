#pragma once

// Unit manufacturing cost: bill-of-materials roll-up, assembly time and cost,
// overhead allocation, and the design-for-assembly figures.
//
// BOM quantities are informational: each row's costs are already per-device
// aggregates, so qty multiplies nothing.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anckit/common.hpp"

namespace anckit::costing {

struct BomLine {
  std::string component;
  int qty = 1;
  Cents purchased;
  Cents processing;
  Cents assembly_labor;
  std::string supplier;

  Cents line_total() const { return purchased + processing + assembly_labor; }
};

struct OverheadRates {
  double materials_rate = 0.10;
  double labor_rate = 0.80;
};

struct BomSummary {
  Cents direct_materials;
  Cents direct_processing;
  Cents direct_labor;
  Cents shipment;
  Cents overhead;
  Cents warranty;
  Cents total_direct;  // materials + processing + labor + shipment
  Cents total_manufacturing;
};

inline void validate(const BomLine& line) {
  const std::string where = "bom[" + line.component + "]";
  if (line.qty < 1) throw ValidationError(where + ".qty", "must be >= 1");
  if (line.purchased.value < 0) throw ValidationError(where + ".purchased", "must be >= 0");
  if (line.processing.value < 0) throw ValidationError(where + ".processing", "must be >= 0");
  if (line.assembly_labor.value < 0) throw ValidationError(where + ".assembly_labor", "must be >= 0");
}

inline void validate(const OverheadRates& rates) {
  require(std::isfinite(rates.materials_rate) && rates.materials_rate >= 0.0 &&
              rates.materials_rate <= 10.0,
          "overhead_rates.materials_rate", "must lie in [0, 10]");
  require(std::isfinite(rates.labor_rate) && rates.labor_rate >= 0.0 && rates.labor_rate <= 10.0,
          "overhead_rates.labor_rate", "must lie in [0, 10]");
}

inline double overhead_cost(double materials, double labor, const OverheadRates& rates) {
  require(std::isfinite(materials) && materials >= 0.0, "materials", "must be >= 0");
  require(std::isfinite(labor) && labor >= 0.0, "labor", "must be >= 0");
  validate(rates);
  return materials * rates.materials_rate + labor * rates.labor_rate;
}

/// Sums the BOM columns. Overhead is computed from `rates` on purchased
/// materials and assembly labor and rounded to the cent, unless
/// `overhead_override` supplies the figure.
inline BomSummary bom_rollup(std::span<const BomLine> lines, Cents shipment,
                             const OverheadRates& rates, Cents warranty,
                             std::optional<Cents> overhead_override = std::nullopt) {
  require(shipment.value >= 0, "shipment", "must be >= 0");
  require(warranty.value >= 0, "warranty", "must be >= 0");
  if (overhead_override) require(overhead_override->value >= 0, "overhead_override", "must be >= 0");
  validate(rates);

  BomSummary s;
  for (const auto& line : lines) {
    validate(line);
    s.direct_materials += line.purchased;
    s.direct_processing += line.processing;
    s.direct_labor += line.assembly_labor;
  }
  s.shipment = shipment;
  s.warranty = warranty;
  s.overhead = overhead_override.value_or(Cents::from_dollars(
      overhead_cost(s.direct_materials.dollars(), s.direct_labor.dollars(), rates)));
  s.total_direct = s.direct_materials + s.direct_processing + s.direct_labor + s.shipment;
  s.total_manufacturing = s.total_direct + s.overhead + s.warranty;
  return s;
}

struct AssemblyOp {
  std::string part;
  int qty = 1;
  double handling_s = 0.0;
  double insertion_s = 0.0;

  double total_s() const { return handling_s + insertion_s; }
};

struct AssemblyCost {
  double total_s = 0.0;
  double cost = 0.0;  // dollars, unrounded
};

inline AssemblyCost assembly_cost(std::span<const AssemblyOp> ops, double hourly_rate) {
  require(std::isfinite(hourly_rate) && hourly_rate >= 0.0, "hourly_rate", "must be >= 0");
  AssemblyCost c;
  for (const auto& op : ops) {
    const std::string where = "assembly[" + op.part + "]";
    if (!(std::isfinite(op.handling_s) && op.handling_s >= 0.0)) {
      throw ValidationError(where + ".handling_s", "must be >= 0");
    }
    if (!(std::isfinite(op.insertion_s) && op.insertion_s >= 0.0)) {
      throw ValidationError(where + ".insertion_s", "must be >= 0");
    }
    c.total_s += op.total_s();
  }
  c.cost = c.total_s / 3600.0 * hourly_rate;
  return c;
}

inline constexpr double kIdealPartSeconds = 3.0;

/// (theoretical minimum parts x 3 s) / estimated total assembly time.
inline double dfa_index(int min_parts, double total_assembly_s) {
  require(min_parts >= 1, "min_parts", "must be >= 1");
  require(std::isfinite(total_assembly_s) && total_assembly_s > 0.0, "total_assembly_s",
          "must be > 0");
  return static_cast<double>(min_parts) * kIdealPartSeconds / total_assembly_s;
}

struct CostReduction {
  double savings = 0.0;
  double pct = 0.0;  // fraction of the old total
};

inline CostReduction cost_reduction_report(double old_total, double new_total) {
  require(std::isfinite(old_total) && old_total > 0.0, "old_total", "must be > 0");
  require_finite(new_total, "new_total");
  const double savings = old_total - new_total;
  return {savings, savings / old_total};
}

inline double gross_margin(double unit_price, double unit_cost) {
  require(std::isfinite(unit_price) && unit_price > 0.0, "unit_price", "must be > 0");
  require_finite(unit_cost, "unit_cost");
  return (unit_price - unit_cost) / unit_price;
}

/// A computed figure next to the value printed in a source table. Flagged
/// when they differ at cent precision.
struct Discrepancy {
  std::string cell;
  double computed = 0.0;
  double expected = 0.0;

  bool flagged() const { return Cents::from_dollars(computed) != Cents::from_dollars(expected); }
};

}  // namespace anckit::costing
