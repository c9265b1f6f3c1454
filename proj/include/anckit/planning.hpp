#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anckit/common.hpp"

namespace anckit::planning {

// ---------------------------------------------------------------------------
// Concept scoring

inline constexpr int kMinRating = 1;
inline constexpr int kMaxRating = 3;

struct Criterion {
  std::string name;
  double weight = 0.0;  // fraction
};

struct ConceptRatings {
  std::string name;
  std::vector<int> ratings;  // one per criterion
};

struct ConceptMatrix {
  std::vector<Criterion> criteria;
  std::vector<ConceptRatings> concepts;
};

struct ConceptScore {
  std::string name;
  double total = 0.0;
  int rank = 0;
};

namespace detail {
// Weights are summed and applied in units of 1e-9 so that decimal weights add
// to one exactly and totals do not depend on criterion order.
inline constexpr std::int64_t kWeightUnits = 1'000'000'000;
}  // namespace detail

inline void validate(const ConceptMatrix& m) {
  require(!m.criteria.empty(), "criteria", "at least one criterion is required");
  std::int64_t sum = 0;
  for (const auto& c : m.criteria) {
    if (!(std::isfinite(c.weight) && c.weight >= 0.0 && c.weight <= 1.0)) {
      throw ValidationError("weights", "weight of '" + c.name + "' must lie in [0, 1]");
    }
    sum += std::llround(c.weight * detail::kWeightUnits);
  }
  if (std::llabs(sum - detail::kWeightUnits) > 1) {
    throw ValidationError("weights", "must sum to 1, got " +
                                         std::to_string(static_cast<double>(sum) /
                                                        detail::kWeightUnits));
  }
  for (const auto& concept_ : m.concepts) {
    if (concept_.ratings.size() != m.criteria.size()) {
      throw ValidationError("ratings[" + concept_.name + "]",
                            "expected " + std::to_string(m.criteria.size()) + " ratings, got " +
                                std::to_string(concept_.ratings.size()));
    }
    for (int r : concept_.ratings) {
      if (r < kMinRating || r > kMaxRating) {
        throw ValidationError("ratings[" + concept_.name + "]",
                              "rating " + std::to_string(r) + " outside [1, 3]");
      }
    }
  }
}

/// Weighted totals, ranked by descending total with ties in input order.
inline std::vector<ConceptScore> concept_score(const ConceptMatrix& m) {
  validate(m);
  std::vector<std::int64_t> units;
  for (const auto& c : m.criteria) units.push_back(std::llround(c.weight * detail::kWeightUnits));

  std::vector<ConceptScore> out;
  std::vector<std::int64_t> raw;
  for (const auto& concept_ : m.concepts) {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < units.size(); ++i) acc += units[i] * concept_.ratings[i];
    raw.push_back(acc);
    out.push_back({concept_.name, static_cast<double>(acc) / detail::kWeightUnits, 0});
  }
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw[a] > raw[b]; });
  for (std::size_t pos = 0; pos < order.size(); ++pos) out[order[pos]].rank = static_cast<int>(pos + 1);
  return out;
}

// ---------------------------------------------------------------------------
// Market size

struct MarketParams {
  double world_pop = 0.0;
  double ref_pop = 0.0;
  double ref_affected = 0.0;
  double tolerance = 0.0;       // share of the scaled-up count kept
  double adoption_share = 0.0;  // share of affected people who buy
  double unit_price = 0.0;
  double unit_cost = 0.0;
  /// The affected count is rounded to this quantum before the profit step
  /// (100,000 turns 2,107,244 into 2.1 million). 0 disables rounding.
  double rounding_quantum = 100'000.0;
};

struct MarketEstimate {
  double affected = 0.0;
  double affected_rounded = 0.0;
  double profit = 0.0;        // from affected_rounded
  double profit_unrounded = 0.0;
};

inline MarketEstimate market_size_estimate(const MarketParams& p) {
  require(std::isfinite(p.ref_pop) && p.ref_pop > 0.0, "ref_pop", "must be > 0");
  require(std::isfinite(p.world_pop) && p.world_pop > 0.0, "world_pop", "must be > 0");
  require(std::isfinite(p.ref_affected) && p.ref_affected > 0.0, "ref_affected", "must be > 0");
  require(std::isfinite(p.tolerance) && p.tolerance >= 0.0 && p.tolerance <= 1.0, "tolerance",
          "must lie in [0, 1]");
  require(std::isfinite(p.adoption_share) && p.adoption_share >= 0.0 && p.adoption_share <= 1.0,
          "adoption_share", "must lie in [0, 1]");
  require_finite(p.unit_price, "unit_price");
  require_finite(p.unit_cost, "unit_cost");
  require(std::isfinite(p.rounding_quantum) && p.rounding_quantum >= 0.0, "rounding_quantum",
          "must be >= 0");

  MarketEstimate e;
  e.affected = p.world_pop / p.ref_pop * p.ref_affected * p.tolerance;
  e.affected_rounded = p.rounding_quantum > 0.0
                           ? std::round(e.affected / p.rounding_quantum) * p.rounding_quantum
                           : e.affected;
  const double margin = p.unit_price - p.unit_cost;
  e.profit = margin * e.affected_rounded * p.adoption_share;
  e.profit_unrounded = margin * e.affected * p.adoption_share;
  return e;
}

// ---------------------------------------------------------------------------
// Risk register

inline constexpr int kDefaultRiskThreshold = 5;

enum class Quadrant { Low, Monitor, Urgent, Critical };

inline std::string_view to_string(Quadrant q) {
  switch (q) {
    case Quadrant::Low: return "LOW";
    case Quadrant::Monitor: return "MONITOR";
    case Quadrant::Urgent: return "URGENT";
    case Quadrant::Critical: return "CRITICAL";
  }
  return "?";
}

struct RiskItem {
  std::string code;
  std::string description;
  std::string category;
  int probability = 1;  // 1..10
  int impact = 1;       // 1..10
};

struct RiskAssessment {
  int score = 0;
  Quadrant quadrant = Quadrant::Low;
};

inline RiskAssessment risk_score_and_map(const RiskItem& item,
                                         int threshold = kDefaultRiskThreshold) {
  const std::string where = item.code.empty() ? std::string("risk") : "risk[" + item.code + "]";
  if (item.probability < 1 || item.probability > 10) {
    throw ValidationError(where + ".probability", "must lie in 1..10");
  }
  if (item.impact < 1 || item.impact > 10) throw ValidationError(where + ".impact", "must lie in 1..10");
  require(threshold >= 1 && threshold <= 10, "threshold", "must lie in 1..10");

  const bool likely = item.probability >= threshold;
  const bool severe = item.impact >= threshold;
  Quadrant q = Quadrant::Low;
  if (likely && severe) q = Quadrant::Critical;
  else if (likely) q = Quadrant::Urgent;
  else if (severe) q = Quadrant::Monitor;
  return {item.probability * item.impact, q};
}

inline void validate_unique_codes(std::span<const RiskItem> items) {
  std::set<std::string, std::less<>> seen;
  for (const auto& item : items) {
    if (!seen.insert(item.code).second) {
      throw ValidationError("code", "duplicate risk code '" + item.code + "'");
    }
  }
}

}  // namespace anckit::planning
