#pragma once

// Report rendering. Every result renders to three formats:
//   table  fixed-width text laid out like the source spreadsheets
//   csv    comma-delimited, header row, dot decimal separator
//   json   UTF-8, snake_case keys, currency in dollars rounded to cents

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "anckit/anc.hpp"
#include "anckit/common.hpp"
#include "anckit/config.hpp"
#include "anckit/costing.hpp"
#include "anckit/csv.hpp"
#include "anckit/econ.hpp"
#include "anckit/planning.hpp"

namespace anckit::report {

using ojson = nlohmann::ordered_json;

enum class Format { Table, Csv, Json };

inline Format parse_format(std::string_view s) {
  if (s == "table") return Format::Table;
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ValidationError("format", "expected table, csv or json, got '" + std::string(s) + "'");
}

inline std::string fixed(double v, int decimals) {
  double r = round_to(v, decimals);
  if (r == 0.0) r = 0.0;  // no "-0.00"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, r);
  return buf;
}

inline std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string percent(double fraction, int decimals = 1) { return fixed(fraction * 100.0, decimals) + "%"; }

inline double money(double v) {
  const double r = round_cents(v);
  return r == 0.0 ? 0.0 : r;
}

inline std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

/// Fixed-width text table. The first column is left-aligned, the rest right-aligned.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> w(header_.size(), 0);
    auto widen = [&](const std::vector<std::string>& row) {
      for (std::size_t i = 0; i < row.size() && i < w.size(); ++i) w[i] = std::max(w[i], row[i].size());
    };
    widen(header_);
    for (const auto& r : rows_) widen(r);
    std::string out;
    auto line = [&](const std::vector<std::string>& row) {
      std::string s;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const std::string c = i < row.size() ? row[i] : "";
        const std::string pad(w[i] - c.size(), ' ');
        if (i > 0) s += "  ";
        s += i == 0 ? c + pad : pad + c;
      }
      while (!s.empty() && s.back() == ' ') s.pop_back();
      out += s + "\n";
    };
    line(header_);
    std::size_t total = 0;
    for (auto x : w) total += x;
    out += std::string(total + 2 * (w.size() - 1), '-') + "\n";
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// ANC

inline std::string emit_report(const config::AncJob& job, const anc::AncResult& r, Format f) {
  const auto& cfg = job.cfg;
  switch (f) {
    case Format::Json: {
      ojson noise = {{"type", job.noise_spec.type}, {"amplitude", job.noise_spec.amplitude}};
      if (job.noise_spec.type == "tone") {
        noise["freq_hz"] = job.noise_spec.freq_hz;
        noise["phase_rad"] = job.noise_spec.phase_rad;
      } else {
        noise["low_hz"] = job.noise_spec.low_hz;
        noise["high_hz"] = job.noise_spec.high_hz;
      }
      ojson trace = ojson::array();
      for (double v : r.attenuation_trace_db) trace.push_back(round_to(v, 2));
      ojson j;
      j["algorithm"] = std::string(anc::to_string(cfg.algorithm));
      j["filter_length"] = cfg.filter_length;
      j["step_size"] = cfg.step_size;
      j["leak_factor"] = cfg.leak_factor;
      j["secondary_estimate"] = cfg.secondary_estimate ? "CUSTOM" : "EXACT";
      j["sample_rate_hz"] = job.sample_rate_hz;
      j["duration_samples"] = cfg.duration_samples;
      j["rng_seed"] = cfg.rng_seed;
      j["noise"] = noise;
      j["primary_taps"] = job.primary.size();
      j["secondary_taps"] = job.secondary.size();
      j["samples_simulated"] = r.residual.size();
      j["window_samples"] = r.window_samples;
      j["attenuation_trace_db"] = trace;
      j["steady_state_attenuation_db"] = round_to(r.steady_state_attenuation_db, 2);
      j["diverged"] = r.diverged;
      return dump(j);
    }
    case Format::Csv: {
      std::string out = "n,disturbance,anti_noise,residual\n";
      for (std::size_t k = 0; k < r.residual.size(); ++k) {
        out += std::to_string(k) + "," + general(r.disturbance[k]) + "," + general(r.anti_noise[k]) + "," +
               general(r.residual[k]) + "\n";
      }
      return out;
    }
    case Format::Table: {
      std::string out;
      out += "Algorithm          " + std::string(anc::to_string(cfg.algorithm)) + "\n";
      out += "Filter length      " + std::to_string(cfg.filter_length) + "\n";
      out += "Step size          " + general(cfg.step_size) + "\n";
      out += "Sample rate (Hz)   " + general(job.sample_rate_hz) + "\n";
      out += "Samples simulated  " + std::to_string(r.residual.size()) + " of " +
             std::to_string(cfg.duration_samples) + "\n";
      out += "Steady state (dB)  " + fixed(r.steady_state_attenuation_db, 1) + "\n";
      out += "Diverged           " + std::string(r.diverged ? "yes" : "no") + "\n\n";
      TextTable t({"Window", "Start (s)", "Attenuation (dB)"});
      for (std::size_t i = 0; i < r.attenuation_trace_db.size(); ++i) {
        t.add({std::to_string(i + 1),
               fixed(static_cast<double>(i * r.window_samples) / job.sample_rate_hz, 2),
               fixed(r.attenuation_trace_db[i], 1)});
      }
      return out + t.render();
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Economics

inline ojson optional_number(const std::optional<double>& v, int decimals) {
  return v ? ojson(round_to(*v, decimals)) : ojson(nullptr);
}

/// `compare` adds the base-model comparison (scenario reports).
inline std::string emit_report(const std::string& name, const econ::EconResult& r, Format f,
                               bool compare) {
  const char* cumulative_kind = r.discounted_break_even ? "discounted" : "nominal";
  switch (f) {
    case Format::Json: {
      ojson periods = ojson::array();
      for (std::size_t i = 0; i < r.cash_flows.size(); ++i) {
        periods.push_back({{"period", i + 1},
                           {"cash_flow", money(r.cash_flows[i])},
                           {"discounted", money(r.discounted[i])},
                           {"cumulative", money(r.cumulative[i])}});
      }
      ojson j;
      j["name"] = name;
      j["discount_rate"] = r.discount_rate;
      j["npv"] = money(r.npv);
      j["irr"] = optional_number(r.irr, 6);
      j["break_even_period"] = r.break_even_period ? ojson(*r.break_even_period) : ojson(nullptr);
      j["break_even_mode"] = cumulative_kind;
      if (compare) {
        j["base_npv"] = money(r.base_npv);
        j["delta_npv"] = money(r.delta_npv);
        j["delta_pct"] = optional_number(r.delta_pct, 6);
        ojson lines = ojson::array();
        for (const auto& l : r.line_deltas) {
          lines.push_back({{"name", l.name},
                           {"first", l.first},
                           {"last", l.last},
                           {"base", l.base},
                           {"adjusted", round_to(l.adjusted, 6)},
                           {"pct", round_to(l.pct, 6)},
                           {"delta", round_to(l.delta, 6)}});
        }
        j["lines"] = lines;
      }
      j["periods"] = periods;
      return dump(j);
    }
    case Format::Csv: {
      std::string out = "period,cash_flow,discounted,cumulative\n";
      for (std::size_t i = 0; i < r.cash_flows.size(); ++i) {
        out += std::to_string(i + 1) + "," + fixed(r.cash_flows[i], 2) + "," + fixed(r.discounted[i], 2) +
               "," + fixed(r.cumulative[i], 2) + "\n";
      }
      return out;
    }
    case Format::Table: {
      std::string out;
      if (!name.empty()) out += name + "\n";
      out += "IRR = " + (r.irr ? percent(*r.irr, 0) : std::string("UNDEFINED")) +
             "    PROJECT NPV $ " + fixed(r.npv, 0) + "\n";
      if (compare) {
        out += "Base NPV $ " + fixed(r.base_npv, 0) + "    % of NPV " +
               (r.delta_pct ? percent(*r.delta_pct) : std::string("UNDEFINED")) + "    $ change " +
               fixed(r.delta_npv, 0) + "\n";
      }
      out += "Break-even period (" + std::string(cumulative_kind) + ") " +
             (r.break_even_period ? std::to_string(*r.break_even_period) : std::string("NONE")) + "\n";
      out += "Discount Rate (per time period) " + percent(r.discount_rate, 2) + "\n\n";
      if (compare) {
        TextTable lines({"MODEL VALUES", "first", "last", "base", "adjusted", "%D from base", "$D from base"});
        for (const auto& l : r.line_deltas) {
          const bool per_unit = l.name == "Unit Price" || l.name == "Unit Production Cost";
          const int dec = per_unit ? 3 : 0;
          lines.add({l.name, std::to_string(l.first), std::to_string(l.last), fixed(l.base, dec),
                     fixed(l.adjusted, dec), percent(l.pct), fixed(l.delta, per_unit ? 2 : 0)});
        }
        out += lines.render() + "\n";
      }
      TextTable periods({"Period", "Cash flow", "Discounted", std::string("Cumulative (") + cumulative_kind + ")"});
      for (std::size_t i = 0; i < r.cash_flows.size(); ++i) {
        periods.add({std::to_string(i + 1), fixed(r.cash_flows[i], 0), fixed(r.discounted[i], 0),
                     fixed(r.cumulative[i], 0)});
      }
      return out + periods.render();
    }
  }
  return {};
}

struct SensitivityLine {
  std::string parameter;
  double pct = 0.0;
  std::string periods;  // "1 - 3"
  econ::SensitivityRow row;
};

inline std::vector<SensitivityLine> run_sensitivity(const config::SensitivityDoc& doc) {
  std::vector<SensitivityLine> out;
  for (const auto& c : doc.rows) {
    SensitivityLine line;
    line.parameter = c.parameter;
    line.pct = c.pct;
    line.row = econ::sensitivity_row(doc.base, c.adjustments);
    const std::string target = econ::canonical_target(c.parameter);
    const econ::ModelSpec adjusted = econ::apply_adjustments(doc.base, c.adjustments);
    int first = adjusted.sales.first, last = adjusted.sales.last;
    for (const auto& e : adjusted.expenses) {
      if (e.name == target) {
        first = e.first;
        last = e.last;
      }
    }
    line.periods = std::to_string(first) + " - " + std::to_string(last);
    out.push_back(std::move(line));
  }
  return out;
}

inline std::string emit_report(const config::SensitivityDoc& doc, const std::vector<SensitivityLine>& rows,
                               Format f) {
  switch (f) {
    case Format::Json: {
      ojson arr = ojson::array();
      for (const auto& l : rows) {
        arr.push_back({{"parameter", l.parameter},
                       {"pct", l.pct},
                       {"periods", l.periods},
                       {"delta_pct", optional_number(l.row.delta_pct, 6)},
                       {"delta_npv", money(l.row.delta_npv)}});
      }
      ojson j;
      j["name"] = doc.name;
      j["base_npv"] = money(econ::npv(econ::build_cash_flows(doc.base), doc.base.discount_rate));
      j["rows"] = arr;
      return dump(j);
    }
    case Format::Csv: {
      std::string out = "parameter,pct,periods,delta_pct,delta_npv\n";
      for (const auto& l : rows) {
        out += csv::escape(l.parameter) + "," + general(l.pct) + "," + l.periods + "," +
               (l.row.delta_pct ? general(round_to(*l.row.delta_pct, 6)) : std::string()) + "," +
               fixed(l.row.delta_npv, 2) + "\n";
      }
      return out;
    }
    case Format::Table: {
      TextTable t({"", "% D from base value", "Periods (Quarter)", "% Change in NPV", "$ Change in NPV"});
      for (const auto& l : rows) {
        t.add({l.parameter, fixed(l.pct * 100.0, 0), l.periods,
               l.row.delta_pct ? percent(*l.row.delta_pct, 2) : std::string("UNDEFINED"),
               fixed(l.row.delta_npv, 0)});
      }
      return (doc.name.empty() ? std::string() : doc.name + "\n") + t.render();
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Costing

struct CostReport {
  std::string name;
  costing::BomSummary summary;
  std::optional<costing::AssemblyCost> assembly;
  double hourly_rate = 0.0;
  std::optional<double> dfa;
  std::optional<costing::CostReduction> reduction;
  std::optional<double> margin;
  std::vector<costing::Discrepancy> discrepancies;
};

/// Computed figures by name, used for the discrepancy check against `expected`.
inline std::vector<std::pair<std::string, double>> cost_figures(const CostReport& r) {
  const auto& s = r.summary;
  std::vector<std::pair<std::string, double>> v = {
      {"direct_materials", s.direct_materials.dollars()},
      {"direct_processing", s.direct_processing.dollars()},
      {"direct_labor", s.direct_labor.dollars()},
      {"shipment", s.shipment.dollars()},
      {"total_direct", s.total_direct.dollars()},
      {"overhead", s.overhead.dollars()},
      {"warranty", s.warranty.dollars()},
      {"total_manufacturing", s.total_manufacturing.dollars()}};
  if (r.assembly) {
    v.emplace_back("assembly_time_s", r.assembly->total_s);
    v.emplace_back("assembly_cost", r.assembly->cost);
  }
  if (r.reduction) {
    v.emplace_back("savings", r.reduction->savings);
    v.emplace_back("savings_pct", r.reduction->pct);
  }
  if (r.dfa) v.emplace_back("dfa_index", *r.dfa);
  if (r.margin) v.emplace_back("gross_margin", *r.margin);
  return v;
}

inline CostReport run_costing(const config::CostDoc& doc) {
  CostReport r;
  r.name = doc.name;
  r.summary = costing::bom_rollup(doc.bom, doc.shipment, doc.rates, doc.warranty, doc.overhead_override);
  if (doc.has_assembly) {
    r.assembly = costing::assembly_cost(doc.assembly, doc.hourly_rate);
    r.hourly_rate = doc.hourly_rate;
    if (doc.dfa_min_parts) r.dfa = costing::dfa_index(*doc.dfa_min_parts, r.assembly->total_s);
  }
  if (doc.reduction) r.reduction = costing::cost_reduction_report(doc.reduction->first, doc.reduction->second);
  if (doc.margin) r.margin = costing::gross_margin(doc.margin->first, doc.margin->second);
  const auto figures = cost_figures(r);
  for (const auto& [key, expected] : doc.expected) {
    const auto it = std::find_if(figures.begin(), figures.end(), [&](const auto& p) { return p.first == key; });
    if (it == figures.end()) throw ValidationError("expected." + key, "no computed figure with this name");
    r.discrepancies.push_back({key, it->second, expected});
  }
  return r;
}

inline std::string emit_report(const CostReport& r, Format f) {
  const auto figures = cost_figures(r);
  auto discrepancy_for = [&](const std::string& key) -> const costing::Discrepancy* {
    for (const auto& d : r.discrepancies) {
      if (d.cell == key) return &d;
    }
    return nullptr;
  };
  // Fractions and seconds are not currency.
  auto render = [](const std::string& key, double v) {
    if (key == "dfa_index" || key == "gross_margin" || key == "savings_pct") return fixed(v, 4);
    if (key == "assembly_time_s") return fixed(v, 0);
    return fixed(v, 2);
  };
  switch (f) {
    case Format::Json: {
      ojson j;
      j["name"] = r.name;
      for (const auto& [key, v] : figures) {
        const bool plain = key == "dfa_index" || key == "gross_margin" || key == "savings_pct";
        j[key] = plain ? round_to(v, 6) : money(v);
      }
      if (r.assembly) j["hourly_rate"] = r.hourly_rate;
      ojson flags = ojson::array();
      for (const auto& d : r.discrepancies) {
        flags.push_back({{"cell", d.cell},
                         {"computed", round_to(d.computed, 6)},
                         {"expected", d.expected},
                         {"flagged", d.flagged()}});
      }
      j["discrepancies"] = flags;
      return dump(j);
    }
    case Format::Csv: {
      std::string out = "item,value,expected,discrepancy\n";
      for (const auto& [key, v] : figures) {
        const auto* d = discrepancy_for(key);
        out += key + "," + render(key, v) + "," + (d ? render(key, d->expected) : std::string()) + "," +
               (d ? (d->flagged() ? "true" : "false") : "") + "\n";
      }
      return out;
    }
    case Format::Table: {
      TextTable t({"Item", "Computed", "Printed", "Flag"});
      for (const auto& [key, v] : figures) {
        const auto* d = discrepancy_for(key);
        t.add({key, render(key, v), d ? render(key, d->expected) : "", d && d->flagged() ? "DISCREPANCY" : ""});
      }
      return (r.name.empty() ? std::string() : r.name + "\n") + t.render();
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Planning

inline std::string emit_report(const planning::ConceptMatrix& m, const std::vector<planning::ConceptScore>& s,
                               Format f) {
  switch (f) {
    case Format::Json: {
      ojson arr = ojson::array();
      for (const auto& c : s) arr.push_back({{"name", c.name}, {"total", round_to(c.total, 9)}, {"rank", c.rank}});
      ojson j;
      j["criteria"] = m.criteria.size();
      j["concepts"] = arr;
      return dump(j);
    }
    case Format::Csv: {
      std::string out = "concept,total,rank\n";
      for (const auto& c : s) out += csv::escape(c.name) + "," + fixed(c.total, 2) + "," + std::to_string(c.rank) + "\n";
      return out;
    }
    case Format::Table: {
      std::vector<std::string> header = {"Selection Criteria", "Weight"};
      for (const auto& c : m.concepts) {
        header.push_back(c.name + " Rating");
        header.push_back("Weighted");
      }
      TextTable t(header);
      for (std::size_t i = 0; i < m.criteria.size(); ++i) {
        std::vector<std::string> row = {m.criteria[i].name, percent(m.criteria[i].weight, 0)};
        for (const auto& c : m.concepts) {
          row.push_back(std::to_string(c.ratings[i]));
          row.push_back(fixed(m.criteria[i].weight * c.ratings[i], 2));
        }
        t.add(row);
      }
      std::vector<std::string> total = {"Total Score", ""};
      std::vector<std::string> rank = {"Ranking", ""};
      for (const auto& c : s) {
        total.push_back("");
        total.push_back(fixed(c.total, 2));
        rank.push_back("");
        rank.push_back(std::to_string(c.rank));
      }
      t.add(total);
      t.add(rank);
      return t.render();
    }
  }
  return {};
}

inline std::string emit_report(const config::RiskRegister& reg, int threshold, Format f) {
  struct Line {
    const planning::RiskItem* item;
    std::optional<planning::RiskAssessment> a;
  };
  std::vector<Line> lines;
  for (const auto& i : reg.rated) lines.push_back({&i, planning::risk_score_and_map(i, threshold)});
  for (const auto& i : reg.unrated) lines.push_back({&i, std::nullopt});
  switch (f) {
    case Format::Json: {
      ojson arr = ojson::array();
      for (const auto& l : lines) {
        ojson o = {{"code", l.item->code}, {"risk", l.item->description}, {"category", l.item->category}};
        if (l.a) {
          o["probability"] = l.item->probability;
          o["impact"] = l.item->impact;
          o["score"] = l.a->score;
          o["quadrant"] = std::string(planning::to_string(l.a->quadrant));
        } else {
          o["quadrant"] = "UNRATED";
        }
        arr.push_back(o);
      }
      ojson j;
      j["threshold"] = threshold;
      j["rated"] = reg.rated.size();
      j["unrated"] = reg.unrated.size();
      j["risks"] = arr;
      return dump(j);
    }
    case Format::Csv: {
      std::string out = "code,risk,category,probability,impact,score,quadrant\n";
      for (const auto& l : lines) {
        out += csv::escape(l.item->code) + "," + csv::escape(l.item->description) + "," +
               csv::escape(l.item->category) + ",";
        if (l.a) {
          out += std::to_string(l.item->probability) + "," + std::to_string(l.item->impact) + "," +
                 std::to_string(l.a->score) + "," + std::string(planning::to_string(l.a->quadrant)) + "\n";
        } else {
          out += ",,,UNRATED\n";
        }
      }
      return out;
    }
    case Format::Table: {
      TextTable t({"Code", "Category", "Probability", "Impact", "Score", "Quadrant"});
      for (const auto& l : lines) {
        if (l.a) {
          t.add({l.item->code, l.item->category, std::to_string(l.item->probability),
                 std::to_string(l.item->impact), std::to_string(l.a->score),
                 std::string(planning::to_string(l.a->quadrant))});
        } else {
          t.add({l.item->code, l.item->category, "", "", "", "UNRATED"});
        }
      }
      return "Threshold " + std::to_string(threshold) + "\n" + t.render();
    }
  }
  return {};
}

inline std::string emit_report(const planning::MarketParams& p, const planning::MarketEstimate& e,
                               std::optional<double> expected_profit, Format f) {
  const bool flagged = expected_profit && std::abs(*expected_profit - e.profit) > 0.5;
  std::vector<std::pair<std::string, std::string>> rows = {
      {"affected", fixed(e.affected, 2)},
      {"affected_rounded", fixed(e.affected_rounded, 0)},
      {"profit", fixed(e.profit, 2)},
      {"profit_unrounded", fixed(e.profit_unrounded, 2)}};
  switch (f) {
    case Format::Json: {
      ojson j;
      j["world_pop"] = p.world_pop;
      j["ref_pop"] = p.ref_pop;
      j["ref_affected"] = p.ref_affected;
      j["tolerance"] = p.tolerance;
      j["adoption_share"] = p.adoption_share;
      j["affected"] = money(e.affected);
      j["affected_rounded"] = e.affected_rounded;
      j["profit"] = money(e.profit);
      j["profit_unrounded"] = money(e.profit_unrounded);
      if (expected_profit) {
        j["expected_profit"] = *expected_profit;
        j["profit_discrepancy"] = flagged;
      }
      return dump(j);
    }
    case Format::Csv: {
      std::string out = "item,value\n";
      for (const auto& [k, v] : rows) out += k + "," + v + "\n";
      if (expected_profit) {
        out += "expected_profit," + fixed(*expected_profit, 2) + "\n";
        out += std::string("profit_discrepancy,") + (flagged ? "true" : "false") + "\n";
      }
      return out;
    }
    case Format::Table: {
      TextTable t({"Item", "Value"});
      for (const auto& [k, v] : rows) t.add({k, v});
      if (expected_profit) {
        t.add({"expected_profit", fixed(*expected_profit, 2)});
        t.add({"profit_discrepancy", flagged ? "DISCREPANCY" : "none"});
      }
      return t.render();
    }
  }
  return {};
}

}  // namespace anckit::report
