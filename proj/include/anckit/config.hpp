#pragma once

// Reading engine inputs from JSON documents and CSV tables. Every parse
// failure surfaces as ValidationError naming the key or column involved;
// unreadable files surface as IoError.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "anckit/anc.hpp"
#include "anckit/common.hpp"
#include "anckit/costing.hpp"
#include "anckit/csv.hpp"
#include "anckit/econ.hpp"
#include "anckit/planning.hpp"

namespace anckit::config {

namespace fs = std::filesystem;
using nlohmann::json;

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  return ss.str();
}

inline json read_json(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.filename().string(), std::string("invalid JSON: ") + e.what());
  }
}

// Relative paths inside a config are resolved against the config's directory.
inline fs::path resolve(const fs::path& config_path, const std::string& ref) {
  const fs::path p(ref);
  return p.is_absolute() ? p : config_path.parent_path() / p;
}

// ---------------------------------------------------------------------------
// JSON field access

inline const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where.empty() ? key : where + "." + key, "is required");
  return *it;
}

inline std::string path_of(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

inline double get_number(const json& obj, const std::string& key, const std::string& where = "") {
  const json& v = field(obj, key, where);
  if (!v.is_number()) throw ValidationError(path_of(where, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(path_of(where, key), "must be finite");
  return d;
}

inline double get_number_or(const json& obj, const std::string& key, double fallback,
                            const std::string& where = "") {
  return obj.contains(key) ? get_number(obj, key, where) : fallback;
}

inline std::int64_t get_integer(const json& obj, const std::string& key, const std::string& where = "") {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) throw ValidationError(path_of(where, key), "expected an integer");
  return v.get<std::int64_t>();
}

inline int get_int(const json& obj, const std::string& key, const std::string& where = "") {
  const auto v = get_integer(obj, key, where);
  if (v < -1'000'000'000 || v > 1'000'000'000) throw ValidationError(path_of(where, key), "out of range");
  return static_cast<int>(v);
}

inline std::string get_string(const json& obj, const std::string& key, const std::string& where = "") {
  const json& v = field(obj, key, where);
  if (!v.is_string()) throw ValidationError(path_of(where, key), "expected a string");
  return v.get<std::string>();
}

inline const json& get_array(const json& obj, const std::string& key, const std::string& where = "") {
  const json& v = field(obj, key, where);
  if (!v.is_array()) throw ValidationError(path_of(where, key), "expected an array");
  return v;
}

// ---------------------------------------------------------------------------
// CSV cells

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

/// Parses "12.5", "$ 12.5", "8%" (percent -> fraction) and "1,840"-free plain
/// numbers.
inline double parse_number(std::string_view cell, const std::string& where) {
  std::string s = trim(cell);
  bool percent = false;
  if (!s.empty() && s.front() == '$') s = trim(std::string_view(s).substr(1));
  if (!s.empty() && s.back() == '%') {
    percent = true;
    s = trim(std::string_view(s).substr(0, s.size() - 1));
  }
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ValidationError(where, "expected a number, got '" + std::string(cell) + "'");
  }
  return percent ? v / 100.0 : v;
}

inline int parse_int(std::string_view cell, const std::string& where) {
  const std::string s = trim(cell);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(where, "expected an integer, got '" + std::string(cell) + "'");
  }
  return v;
}

/// Currency must be representable in whole cents.
inline Cents parse_cents(std::string_view cell, const std::string& where) {
  const double d = parse_number(cell, where);
  const Cents c = Cents::from_dollars(d);
  if (std::abs(c.dollars() - d) > 1e-9) throw ValidationError(where, "has sub-cent precision");
  return c;
}

inline Cents to_cents(double dollars, const std::string& where) {
  const Cents c = Cents::from_dollars(dollars);
  if (std::abs(c.dollars() - dollars) > 1e-9) throw ValidationError(where, "has sub-cent precision");
  return c;
}

inline const std::string& cell(const csv::Row& row, std::size_t col, std::size_t line,
                               const std::string& name) {
  if (col >= row.size()) {
    throw ValidationError(name, "row " + std::to_string(line) + " has too few columns");
  }
  return row[col];
}

inline csv::Table read_csv(const fs::path& path) {
  try {
    return csv::read_table(read_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.filename().string(), e.what());
  }
}

// ---------------------------------------------------------------------------
// Acoustic paths and ANC jobs

inline anc::FirPath parse_path(const json& v, const std::string& where) {
  if (v.is_array()) {
    std::vector<double> taps;
    for (const auto& t : v) {
      if (!t.is_number()) throw ValidationError(where, "taps must be numbers");
      taps.push_back(t.get<double>());
    }
    try {
      return anc::FirPath(std::move(taps));
    } catch (const ValidationError& e) {
      throw ValidationError(where, e.what());
    }
  }
  if (v.is_object()) {
    const std::string type = get_string(v, "type", where);
    if (type != "damped") throw ValidationError(where + ".type", "expected 'damped' or a tap array");
    try {
      return anc::damped_path(static_cast<std::size_t>(std::max<std::int64_t>(0, get_integer(v, "length", where))),
                              static_cast<std::size_t>(std::max<std::int64_t>(0, get_integer(v, "delay", where))),
                              get_number(v, "decay", where), get_number(v, "freq", where),
                              get_number(v, "gain", where));
    } catch (const ValidationError& e) {
      throw ValidationError(where + "." + e.field(), e.what());
    }
  }
  throw ValidationError(where, "expected a tap array or a path object");
}

struct NoiseSpec {
  std::string type;  // "tone" | "broadband"
  double freq_hz = 0.0;
  double amplitude = 1.0;
  double phase_rad = 0.0;
  double low_hz = 0.0;
  double high_hz = 0.0;
};

struct AncJob {
  anc::AncConfig cfg;
  double sample_rate_hz = anc::kDefaultSampleRateHz;
  NoiseSpec noise_spec;
  anc::SampleBuffer noise;
  anc::FirPath primary = anc::FirPath::identity();
  anc::FirPath secondary = anc::FirPath::identity();
};

inline AncJob parse_anc_job(const json& doc) {
  AncJob job;
  if (!doc.contains("rng_seed")) throw ValidationError("rng_seed", "is required for reproducibility");
  const json& seed = doc["rng_seed"];
  if (!seed.is_number_unsigned()) throw ValidationError("rng_seed", "expected an unsigned integer");
  job.cfg.rng_seed = seed.get<std::uint64_t>();

  job.sample_rate_hz = get_number_or(doc, "sample_rate_hz", anc::kDefaultSampleRateHz);
  require(job.sample_rate_hz > 0.0, "sample_rate_hz", "must be > 0");
  const auto duration = get_integer(doc, "duration_samples");
  require(duration >= 1, "duration_samples", "must be >= 1");
  job.cfg.duration_samples = static_cast<std::size_t>(duration);

  const json& ctl = doc.contains("controller") ? doc["controller"] : json::object();
  if (!ctl.is_object()) throw ValidationError("controller", "expected an object");
  if (ctl.contains("algorithm")) {
    if (!ctl["algorithm"].is_string()) throw ValidationError("controller.algorithm", "expected a string");
    try {
      job.cfg.algorithm = anc::parse_algorithm(ctl["algorithm"].get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError("controller.algorithm", e.what());
    }
  }
  if (ctl.contains("filter_length")) {
    const auto l = get_integer(ctl, "filter_length", "controller");
    require(l >= 1, "controller.filter_length", "must be >= 1");
    job.cfg.filter_length = static_cast<std::size_t>(l);
  }
  job.cfg.step_size =
      get_number_or(ctl, "step_size", anc::default_step_size(job.cfg.algorithm), "controller");
  job.cfg.leak_factor = get_number_or(ctl, "leak_factor", 0.0, "controller");
  job.cfg.window_seconds = get_number_or(ctl, "window_seconds", anc::kDefaultWindowSeconds, "controller");
  if (ctl.contains("secondary_estimate")) {
    const json& est = ctl["secondary_estimate"];
    if (est.is_string()) {
      if (est.get<std::string>() != "EXACT") {
        throw ValidationError("controller.secondary_estimate", "expected \"EXACT\" or a path");
      }
    } else {
      job.cfg.secondary_estimate = parse_path(est, "controller.secondary_estimate");
    }
  }

  job.primary = parse_path(field(doc, "primary", ""), "primary");
  job.secondary = parse_path(field(doc, "secondary", ""), "secondary");

  const json& noise = field(doc, "noise", "");
  job.noise_spec.type = get_string(noise, "type", "noise");
  const std::size_t n = job.cfg.duration_samples;
  try {
    if (job.noise_spec.type == "tone") {
      job.noise_spec.freq_hz = get_number(noise, "freq_hz", "noise");
      job.noise_spec.amplitude = get_number_or(noise, "amplitude", 1.0, "noise");
      job.noise_spec.phase_rad = get_number_or(noise, "phase_rad", 0.0, "noise");
      job.noise = anc::generate_tone(job.noise_spec.freq_hz, job.noise_spec.amplitude,
                                     job.noise_spec.phase_rad, n, job.sample_rate_hz);
    } else if (job.noise_spec.type == "broadband") {
      job.noise_spec.low_hz = get_number(noise, "low_hz", "noise");
      job.noise_spec.high_hz = get_number(noise, "high_hz", "noise");
      job.noise_spec.amplitude = get_number_or(noise, "amplitude", 1.0, "noise");
      job.noise = anc::scale(anc::generate_broadband(job.cfg.rng_seed, job.noise_spec.low_hz,
                                                     job.noise_spec.high_hz, n, job.sample_rate_hz),
                             job.noise_spec.amplitude);
    } else {
      throw ValidationError("noise.type", "expected 'tone' or 'broadband'");
    }
  } catch (const ValidationError& e) {
    if (e.field().rfind("noise", 0) == 0) throw;
    throw ValidationError("noise." + e.field(), e.what());
  }

  try {
    anc::validate(job.cfg);
  } catch (const ValidationError& e) {
    throw ValidationError("controller." + e.field(), e.what());
  }
  return job;
}

// ---------------------------------------------------------------------------
// Economic models

inline econ::ModelSpec parse_model_spec(const json& doc) {
  econ::ModelSpec spec;
  spec.horizon = get_int(doc, "horizon");
  spec.discount_rate = get_number(doc, "discount_rate");
  const json& lines = get_array(doc, "expenses");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = "expenses[" + std::to_string(i) + "]";
    econ::ExpenseLine line;
    line.name = get_string(lines[i], "name", where);
    line.first = get_int(lines[i], "first", where);
    line.last = get_int(lines[i], "last", where);
    line.rate = get_number(lines[i], "rate", where);
    spec.expenses.push_back(std::move(line));
  }
  const json& s = field(doc, "sales", "");
  spec.sales.first = get_int(s, "first", "sales");
  spec.sales.last = get_int(s, "last", "sales");
  spec.sales.units = get_number(s, "units", "sales");
  spec.sales.unit_price = get_number(s, "unit_price", "sales");
  spec.sales.unit_cost = get_number(s, "unit_cost", "sales");
  econ::validate(spec);
  return spec;
}

inline json to_json(const econ::ModelSpec& spec) {
  json lines = json::array();
  for (const auto& l : spec.expenses) {
    lines.push_back({{"name", l.name}, {"first", l.first}, {"last", l.last}, {"rate", l.rate}});
  }
  return {{"horizon", spec.horizon},
          {"discount_rate", spec.discount_rate},
          {"expenses", lines},
          {"sales",
           {{"first", spec.sales.first},
            {"last", spec.sales.last},
            {"units", spec.sales.units},
            {"unit_price", spec.sales.unit_price},
            {"unit_cost", spec.sales.unit_cost}}}};
}

inline std::vector<econ::Adjustment> parse_adjustments(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ValidationError(where, "expected an array");
  std::vector<econ::Adjustment> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    econ::Adjustment a;
    a.target = get_string(arr[i], "target", w);
    a.pct = get_number(arr[i], "pct", w);
    if (arr[i].contains("first")) a.first_override = get_int(arr[i], "first", w);
    if (arr[i].contains("last")) a.last_override = get_int(arr[i], "last", w);
    out.push_back(std::move(a));
  }
  return out;
}

/// A model document: either an inline model, or `"base": "<file>"` naming
/// one, plus optional adjustments.
struct ScenarioDoc {
  std::string name;
  econ::ModelSpec base;
  std::vector<econ::Adjustment> adjustments;
};

inline econ::ModelSpec load_base(const json& doc, const fs::path& config_path) {
  if (doc.contains("base")) {
    const json& ref = doc["base"];
    if (!ref.is_string()) throw ValidationError("base", "expected a file path");
    const fs::path base_path = resolve(config_path, ref.get<std::string>());
    const json base_doc = read_json(base_path);
    if (base_doc.contains("base")) throw ValidationError("base", "base models cannot chain");
    return parse_model_spec(base_doc);
  }
  return parse_model_spec(doc);
}

inline ScenarioDoc parse_scenario(const json& doc, const fs::path& config_path) {
  ScenarioDoc s;
  if (doc.contains("name")) s.name = get_string(doc, "name");
  s.base = load_base(doc, config_path);
  if (doc.contains("adjustments")) s.adjustments = parse_adjustments(doc["adjustments"], "adjustments");
  econ::apply_adjustments(s.base, s.adjustments);
  return s;
}

struct SensitivityCase {
  std::string parameter;
  double pct = 0.0;
  std::vector<econ::Adjustment> adjustments;
};

struct SensitivityDoc {
  std::string name;
  econ::ModelSpec base;
  std::vector<SensitivityCase> rows;
};

/// `rows` lists cases explicitly (each may carry a compound adjustment list);
/// `grid` expands parameters x pcts into single-adjustment cases.
inline SensitivityDoc parse_sensitivity(const json& doc, const fs::path& config_path) {
  SensitivityDoc s;
  if (doc.contains("name")) s.name = get_string(doc, "name");
  s.base = load_base(doc, config_path);
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    const json& params = get_array(g, "parameters", "grid");
    const json& pcts = get_array(g, "pcts", "grid");
    for (const auto& p : params) {
      if (!p.is_string()) throw ValidationError("grid.parameters", "expected strings");
      for (const auto& pct : pcts) {
        if (!pct.is_number()) throw ValidationError("grid.pcts", "expected numbers");
        SensitivityCase c{p.get<std::string>(), pct.get<double>(), {}};
        c.adjustments.push_back({c.parameter, c.pct, std::nullopt, std::nullopt});
        s.rows.push_back(std::move(c));
      }
    }
  }
  if (doc.contains("rows")) {
    const json& rows = get_array(doc, "rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string where = "rows[" + std::to_string(i) + "]";
      SensitivityCase c;
      c.parameter = get_string(rows[i], "parameter", where);
      c.pct = get_number(rows[i], "pct", where);
      if (rows[i].contains("adjustments")) {
        c.adjustments = parse_adjustments(rows[i]["adjustments"], where + ".adjustments");
      } else {
        c.adjustments.push_back({c.parameter, c.pct, std::nullopt, std::nullopt});
      }
      s.rows.push_back(std::move(c));
    }
  }
  if (s.rows.empty()) throw ValidationError("rows", "a sensitivity document needs 'rows' or 'grid'");
  for (const auto& c : s.rows) econ::apply_adjustments(s.base, c.adjustments);
  return s;
}

// ---------------------------------------------------------------------------
// Bill of materials

inline constexpr std::string_view kBomColumns[] = {
    "Component",        "Qty required",        "Purchased Costs", "Processing",
    "Assembly (labor)", "Total Unit Variable", "Suppliers"};

/// Reads a BOM table. The "Total Unit Variable" column must equal the sum of
/// the three cost columns to the cent.
inline std::vector<costing::BomLine> parse_bom(const csv::Table& t) {
  std::size_t col[7];
  for (std::size_t i = 0; i < 7; ++i) col[i] = t.require_column(kBomColumns[i]);
  std::vector<costing::BomLine> lines;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t line_no = r + 2;
    costing::BomLine l;
    l.component = trim(cell(row, col[0], line_no, "Component"));
    const std::string where = "bom[" + (l.component.empty() ? std::to_string(line_no) : l.component) + "]";
    l.qty = parse_int(cell(row, col[1], line_no, "Qty required"), where + ".Qty required");
    l.purchased = parse_cents(cell(row, col[2], line_no, "Purchased Costs"), where + ".Purchased Costs");
    l.processing = parse_cents(cell(row, col[3], line_no, "Processing"), where + ".Processing");
    l.assembly_labor =
        parse_cents(cell(row, col[4], line_no, "Assembly (labor)"), where + ".Assembly (labor)");
    const Cents stated =
        parse_cents(cell(row, col[5], line_no, "Total Unit Variable"), where + ".Total Unit Variable");
    if (stated != l.line_total()) {
      throw ValidationError(where + ".Total Unit Variable",
                            "stated " + std::to_string(stated.dollars()) + " but columns sum to " +
                                std::to_string(l.line_total().dollars()));
    }
    l.supplier = trim(cell(row, col[6], line_no, "Suppliers"));
    costing::validate(l);
    lines.push_back(std::move(l));
  }
  return lines;
}

inline constexpr std::string_view kAssemblyColumns[] = {
    "Parts", "Quantity", "Handling Time (s)", "Insertion Time (s)", "Total Time (s)"};

inline std::vector<costing::AssemblyOp> parse_assembly(const csv::Table& t) {
  std::size_t col[5];
  for (std::size_t i = 0; i < 5; ++i) col[i] = t.require_column(kAssemblyColumns[i]);
  std::vector<costing::AssemblyOp> ops;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t line_no = r + 2;
    costing::AssemblyOp op;
    op.part = trim(cell(row, col[0], line_no, "Parts"));
    const std::string where = "assembly[" + op.part + "]";
    op.qty = parse_int(cell(row, col[1], line_no, "Quantity"), where + ".Quantity");
    op.handling_s = parse_number(cell(row, col[2], line_no, "Handling Time (s)"), where + ".Handling Time (s)");
    op.insertion_s =
        parse_number(cell(row, col[3], line_no, "Insertion Time (s)"), where + ".Insertion Time (s)");
    const double stated = parse_number(cell(row, col[4], line_no, "Total Time (s)"), where + ".Total Time (s)");
    if (std::abs(stated - op.total_s()) > 1e-9) {
      throw ValidationError(where + ".Total Time (s)", "does not equal handling + insertion");
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

struct CostDoc {
  std::string name;
  std::vector<costing::BomLine> bom;
  Cents shipment;
  Cents warranty;
  costing::OverheadRates rates;
  std::optional<Cents> overhead_override;
  std::vector<costing::AssemblyOp> assembly;
  bool has_assembly = false;
  double hourly_rate = 10.0;
  std::optional<int> dfa_min_parts;
  std::optional<std::pair<double, double>> reduction;  // old, new
  std::optional<std::pair<double, double>> margin;     // price, cost
  std::vector<std::pair<std::string, double>> expected;
};

inline CostDoc parse_cost_doc(const json& doc, const fs::path& config_path) {
  CostDoc d;
  if (doc.contains("name")) d.name = get_string(doc, "name");
  d.bom = parse_bom(read_csv(resolve(config_path, get_string(doc, "bom_csv"))));
  d.shipment = to_cents(get_number_or(doc, "shipment", 0.0), "shipment");
  d.warranty = to_cents(get_number_or(doc, "warranty", 0.0), "warranty");
  if (doc.contains("overhead_rates")) {
    const json& r = doc["overhead_rates"];
    d.rates.materials_rate = get_number(r, "materials", "overhead_rates");
    d.rates.labor_rate = get_number(r, "labor", "overhead_rates");
  }
  costing::validate(d.rates);
  if (doc.contains("overhead_override") && !doc["overhead_override"].is_null()) {
    d.overhead_override = to_cents(get_number(doc, "overhead_override"), "overhead_override");
  }
  if (doc.contains("assembly")) {
    const json& a = doc["assembly"];
    d.assembly = parse_assembly(read_csv(resolve(config_path, get_string(a, "csv", "assembly"))));
    d.has_assembly = true;
    d.hourly_rate = get_number_or(a, "hourly_rate", 10.0, "assembly");
    if (a.contains("min_parts")) d.dfa_min_parts = get_int(a, "min_parts", "assembly");
  }
  if (doc.contains("reduction")) {
    const json& r = doc["reduction"];
    d.reduction = {get_number(r, "old_total", "reduction"), get_number(r, "new_total", "reduction")};
  }
  if (doc.contains("margin")) {
    const json& m = doc["margin"];
    d.margin = {get_number(m, "unit_price", "margin"), get_number(m, "unit_cost", "margin")};
  }
  if (doc.contains("expected")) {
    const json& e = doc["expected"];
    if (!e.is_object()) throw ValidationError("expected", "expected an object");
    for (const auto& [key, value] : e.items()) {
      if (!value.is_number()) throw ValidationError("expected." + key, "expected a number");
      d.expected.emplace_back(key, value.get<double>());
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Concept matrix and risk register

/// Concept table: "Selection Criteria", "Weight", then one rating column per
/// concept. Weights may be written as fractions or percentages.
inline planning::ConceptMatrix parse_concepts(const csv::Table& t) {
  const std::size_t name_col = t.require_column("Selection Criteria");
  const std::size_t weight_col = t.require_column("Weight");
  std::vector<std::size_t> concept_cols;
  planning::ConceptMatrix m;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == name_col || c == weight_col) continue;
    concept_cols.push_back(c);
    m.concepts.push_back({trim(t.header[c]), {}});
  }
  if (m.concepts.empty()) throw ValidationError("concepts", "no concept columns in header");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t line_no = r + 2;
    planning::Criterion crit;
    crit.name = trim(cell(row, name_col, line_no, "Selection Criteria"));
    crit.weight = parse_number(cell(row, weight_col, line_no, "Weight"), "weights[" + crit.name + "]");
    m.criteria.push_back(crit);
    for (std::size_t k = 0; k < concept_cols.size(); ++k) {
      m.concepts[k].ratings.push_back(parse_int(cell(row, concept_cols[k], line_no, m.concepts[k].name),
                                                "ratings[" + m.concepts[k].name + "]"));
    }
  }
  planning::validate(m);
  return m;
}

struct RiskRegister {
  std::vector<planning::RiskItem> rated;
  std::vector<planning::RiskItem> unrated;  // probability/impact left blank
};

/// Register columns: Code, Risk, Category, Probability, Impact.
inline RiskRegister parse_risks(const csv::Table& t) {
  const std::size_t code = t.require_column("Code");
  const std::size_t desc = t.require_column("Risk");
  const std::size_t cat = t.require_column("Category");
  const std::size_t prob = t.require_column("Probability");
  const std::size_t imp = t.require_column("Impact");
  RiskRegister reg;
  std::vector<planning::RiskItem> all;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t line_no = r + 2;
    planning::RiskItem item;
    item.code = trim(cell(row, code, line_no, "Code"));
    if (item.code.empty()) throw ValidationError("Code", "row " + std::to_string(line_no) + " has no code");
    item.description = trim(cell(row, desc, line_no, "Risk"));
    item.category = trim(cell(row, cat, line_no, "Category"));
    const std::string p = trim(cell(row, prob, line_no, "Probability"));
    const std::string i = trim(cell(row, imp, line_no, "Impact"));
    all.push_back(item);
    if (p.empty() && i.empty()) {
      reg.unrated.push_back(std::move(item));
      continue;
    }
    item.probability = parse_int(p, "risk[" + item.code + "].probability");
    item.impact = parse_int(i, "risk[" + item.code + "].impact");
    planning::risk_score_and_map(item);  // range check
    reg.rated.push_back(std::move(item));
  }
  planning::validate_unique_codes(all);
  return reg;
}

inline planning::MarketParams parse_market(const json& doc) {
  planning::MarketParams p;
  p.world_pop = get_number(doc, "world_pop");
  p.ref_pop = get_number(doc, "ref_pop");
  p.ref_affected = get_number(doc, "ref_affected");
  p.tolerance = get_number(doc, "tolerance");
  p.adoption_share = get_number(doc, "adoption_share");
  p.unit_price = get_number(doc, "unit_price");
  p.unit_cost = get_number(doc, "unit_cost");
  p.rounding_quantum = get_number_or(doc, "rounding_quantum", p.rounding_quantum);
  return p;
}

}  // namespace anckit::config
