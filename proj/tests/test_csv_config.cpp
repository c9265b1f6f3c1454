#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <functional>

#include "anckit/config.hpp"
#include "anckit/csv.hpp"

using namespace anckit;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
namespace fs = std::filesystem;

namespace {

const std::string kData = ANCKIT_DATA_DIR;

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<none>";
}

nlohmann::json anc_doc() { return config::read_json(kData + "/anc_tone_32tap.json"); }

}  // namespace

TEST_CASE("CSV quoting, escapes and line endings", "[csv]") {
  const auto rows = csv::parse_rows("a,b,c\r\n\"x, y\",\"say \"\"hi\"\"\",\n\n3,,\"multi\nline\"\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == csv::Row{"a", "b", "c"});
  CHECK(rows[1] == csv::Row{"x, y", "say \"hi\"", ""});
  CHECK(rows[2] == csv::Row{"3", "", "multi\nline"});
}

TEST_CASE("CSV byte-order mark and missing final newline", "[csv]") {
  const auto t = csv::read_table("\xEF\xBB\xBFName,Value\nx,1");
  CHECK(t.header == csv::Row{"Name", "Value"});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.require_column("Value") == 1);
  CHECK_FALSE(t.column("Other"));
  CHECK(field_of([&] { t.require_column("Other"); }) == "Other");
}

TEST_CASE("CSV syntax errors", "[csv]") {
  CHECK_THROWS_AS(csv::parse_rows("a,\"open\n"), ValidationError);
  CHECK_THROWS_AS(csv::parse_rows("a,b\"c\"\n"), ValidationError);
  CHECK_THROWS_AS(csv::read_table(""), ValidationError);
}

TEST_CASE("CSV escape round-trips through the reader", "[csv][property]") {
  const std::vector<std::string> fields = {"plain", "with,comma", "quote\"inside", "new\nline", "", " spaced "};
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv::escape(fields[i]);
  const auto rows = csv::parse_rows(line + "\n");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == fields);
}

TEST_CASE("numeric cells accept currency and percent forms", "[config]") {
  CHECK(config::parse_number("$ 0.20", "x") == 0.20);
  CHECK(config::parse_number(" 12.5 ", "x") == 12.5);
  CHECK_THAT(config::parse_number("8%", "x"), WithinAbs(0.08, 1e-15));
  CHECK(field_of([] { config::parse_number("12a", "cell"); }) == "cell");
  CHECK(field_of([] { config::parse_number("", "cell"); }) == "cell");
  CHECK(config::parse_int("38", "x") == 38);
  CHECK(field_of([] { config::parse_int("3.5", "qty"); }) == "qty");
  CHECK(field_of([] { config::parse_cents("1.005", "price"); }) == "price");
  CHECK(config::parse_cents("94.21", "x").value == 9421);
}

TEST_CASE("BOM rows whose total disagrees with their columns are rejected", "[config]") {
  const auto t = csv::read_table(
      "Component,Qty required,Purchased Costs,Processing,Assembly (labor),Total Unit Variable,Suppliers\n"
      "Speaker,1,1.3,0.3,0.2,1.9,Shop\n");
  CHECK(field_of([&] { config::parse_bom(t); }) == "bom[Speaker].Total Unit Variable");
  const auto missing = csv::read_table("Component,Qty required\nSpeaker,1\n");
  CHECK(field_of([&] { config::parse_bom(missing); }) == "Purchased Costs");
}

TEST_CASE("assembly rows must add handling and insertion", "[config]") {
  const auto t = csv::read_table(
      "Parts,Quantity,Handling Time (s),Insertion Time (s),Total Time (s)\nPCB,1,20,25,46\n");
  CHECK(field_of([&] { config::parse_assembly(t); }) == "assembly[PCB].Total Time (s)");
}

TEST_CASE("ANC job parsing", "[config]") {
  const auto job = config::parse_anc_job(anc_doc());
  CHECK(job.cfg.algorithm == anc::Algorithm::Fxlms);
  CHECK(job.cfg.filter_length == 128);
  CHECK(job.cfg.step_size == 1e-3);
  CHECK(job.cfg.duration_samples == 40000);
  CHECK(job.noise.size() == 40000);
  CHECK(job.primary.size() == 32);
  CHECK_FALSE(job.cfg.secondary_estimate);
  CHECK(job.noise_spec.type == "tone");
}

TEST_CASE("ANC job errors name the key", "[config][validation]") {
  auto with = [](const std::function<void(nlohmann::json&)>& edit) {
    auto doc = anc_doc();
    edit(doc);
    return field_of([&] { config::parse_anc_job(doc); });
  };
  CHECK(with([](auto& d) { d.erase("rng_seed"); }) == "rng_seed");
  CHECK(with([](auto& d) { d["rng_seed"] = -4; }) == "rng_seed");
  CHECK(with([](auto& d) { d["controller"]["algorithm"] = "RLS"; }) == "controller.algorithm");
  CHECK(with([](auto& d) { d["controller"]["step_size"] = -1.0; }) == "controller.step_size");
  CHECK(with([](auto& d) { d["controller"]["leak_factor"] = 1.0; }) == "controller.leak_factor");
  CHECK(with([](auto& d) { d["controller"]["secondary_estimate"] = "GUESS"; }) == "controller.secondary_estimate");
  CHECK(with([](auto& d) { d["noise"]["type"] = "pink"; }) == "noise.type");
  CHECK(with([](auto& d) { d["noise"]["freq_hz"] = 5000.0; }) == "noise.freq_hz");
  CHECK(with([](auto& d) { d["primary"] = nlohmann::json::array(); }) == "primary");
  CHECK(with([](auto& d) { d["secondary"]["type"] = "room"; }) == "secondary.type");
  CHECK(with([](auto& d) { d.erase("duration_samples"); }) == "duration_samples");
}

TEST_CASE("custom secondary estimate", "[config]") {
  auto doc = anc_doc();
  doc["controller"]["secondary_estimate"] = {1.0, 0.5};
  const auto job = config::parse_anc_job(doc);
  REQUIRE(job.cfg.secondary_estimate);
  CHECK(job.cfg.secondary_estimate->size() == 2);
}

TEST_CASE("model documents round-trip bit-for-bit", "[config][property]") {
  const auto spec = config::parse_model_spec(config::read_json(kData + "/base_case.json"));
  const auto again = config::parse_model_spec(nlohmann::json::parse(config::to_json(spec).dump()));
  CHECK(econ::npv(econ::build_cash_flows(again), again.discount_rate) ==
        econ::npv(econ::build_cash_flows(spec), spec.discount_rate));
  CHECK(config::to_json(again) == config::to_json(spec));
}

TEST_CASE("scenario documents resolve their base", "[config]") {
  const auto path = kData + "/best_case.json";
  const auto s = config::parse_scenario(config::read_json(path), path);
  CHECK(s.name == "Best case");
  CHECK(s.base.horizon == 24);
  CHECK(s.adjustments.size() == 8);
}

TEST_CASE("scenario errors", "[config][validation]") {
  const auto dir = fs::temp_directory_path() / "anckit_cfg_test";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "chain.json") << R"({"base": ")" << kData << R"(/best_case.json"})";
    std::ofstream(dir / "bad_target.json") << R"({"base": ")" << kData
                                           << R"(/base_case.json", "adjustments": [{"target": "Rent", "pct": 0.1}]})";
    std::ofstream(dir / "no_pct.json") << R"({"base": ")" << kData
                                       << R"(/base_case.json", "adjustments": [{"target": "Testing"}]})";
  }
  auto parse = [&](const char* f) {
    return field_of([&] { config::parse_scenario(config::read_json(dir / f), dir / f); });
  };
  CHECK(parse("chain.json") == "base");
  CHECK(parse("bad_target.json") == "target");
  CHECK(parse("no_pct.json") == "adjustments[0].pct");
  CHECK_THROWS_AS(config::read_json(dir / "absent.json"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("model errors name the key", "[config][validation]") {
  auto doc = config::read_json(kData + "/base_case.json");
  doc["expenses"][1]["rate"] = "lots";
  CHECK(field_of([&] { config::parse_model_spec(doc); }) == "expenses[1].rate");
  doc = config::read_json(kData + "/base_case.json");
  doc["sales"].erase("units");
  CHECK(field_of([&] { config::parse_model_spec(doc); }) == "sales.units");
}

TEST_CASE("sensitivity documents", "[config]") {
  const auto path = kData + "/sensitivity_table52.json";
  const auto s = config::parse_sensitivity(config::read_json(path), path);
  REQUIRE(s.rows.size() == 24);
  CHECK(s.rows[0].parameter == "Development");
  CHECK(s.rows[0].adjustments.size() == 1);
  CHECK(s.rows[14].parameter == "Ongoing Marketing Costs");
  CHECK(s.rows[14].adjustments.size() == 2);

  const auto grid_path = kData + "/sensitivity_grid.json";
  const auto g = config::parse_sensitivity(config::read_json(grid_path), grid_path);
  CHECK(g.rows.size() == 24);
}

TEST_CASE("cost documents", "[config]") {
  const auto path = kData + "/cost_table14.json";
  const auto d = config::parse_cost_doc(config::read_json(path), path);
  CHECK(d.bom.size() == 32);
  CHECK(d.shipment.value == 20);
  CHECK(d.warranty.value == 32);
  CHECK(d.has_assembly);
  CHECK(d.dfa_min_parts == 58);
  CHECK(d.expected.size() == 6);
}

TEST_CASE("component names with commas survive the CSV", "[config]") {
  const auto lines = config::parse_bom(config::read_csv(kData + "/bom_table14.csv"));
  bool found = false;
  for (const auto& l : lines) found = found || l.component == "Amplifier -LM380N-8/NOPB,Audio Amp Speaker 1-CH Mono 2.5W";
  CHECK(found);
}

TEST_CASE("risk register parsing", "[config]") {
  const auto t = csv::read_table("Code,Risk,Category,Probability,Impact\nF1,High costs,Financial,7,8\nF2,Low sales,Financial,,\n");
  const auto reg = config::parse_risks(t);
  REQUIRE(reg.rated.size() == 1);
  CHECK(reg.rated[0].probability == 7);
  CHECK(reg.unrated.size() == 1);
  const auto dup = csv::read_table("Code,Risk,Category,Probability,Impact\nF1,a,b,1,1\nF1,c,d,,\n");
  CHECK(field_of([&] { config::parse_risks(dup); }) == "code");
  const auto bad = csv::read_table("Code,Risk,Category,Probability,Impact\nF1,a,b,x,1\n");
  CHECK(field_of([&] { config::parse_risks(bad); }) == "risk[F1].probability");
}
