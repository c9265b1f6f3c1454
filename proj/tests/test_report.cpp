#include <catch_amalgamated.hpp>

#include <regex>
#include <set>
#include <sstream>

#include "anckit/cli.hpp"
#include "anckit/report.hpp"

using namespace anckit;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const std::string kData = ANCKIT_DATA_DIR;

std::string run(cli::Subcommand sub, const std::string& file, const std::string& format) {
  cli::Command cmd;
  cmd.subcommand = sub;
  cmd.config_path = kData + "/" + file;
  cmd.format = format;
  std::ostringstream out, err;
  cli::run_command(cmd, out, err);
  return out.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

void collect_keys(const nlohmann::json& j, std::set<std::string>& keys) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      keys.insert(k);
      collect_keys(v, keys);
    }
  } else if (j.is_array()) {
    for (const auto& v : j) collect_keys(v, keys);
  }
}

struct Job {
  cli::Subcommand sub;
  const char* file;
};

const Job kJobs[] = {{cli::Subcommand::AncSimulate, "anc_tone_2tap.json"},
                     {cli::Subcommand::EconNpv, "base_case.json"},
                     {cli::Subcommand::EconScenario, "worst_case.json"},
                     {cli::Subcommand::EconSensitivity, "sensitivity_table52.json"},
                     {cli::Subcommand::CostBom, "cost_table16.json"},
                     {cli::Subcommand::PlanConcept, "concept_table6.csv"},
                     {cli::Subcommand::PlanRisk, "risk_register.csv"},
                     {cli::Subcommand::PlanMarket, "market.json"}};

}  // namespace

TEST_CASE("format names", "[report]") {
  CHECK(report::parse_format("table") == report::Format::Table);
  CHECK(report::parse_format("csv") == report::Format::Csv);
  CHECK(report::parse_format("json") == report::Format::Json);
  try {
    report::parse_format("xml");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "format");
  }
}

TEST_CASE("number formatting", "[report]") {
  CHECK(report::fixed(-0.001, 2) == "0.00");
  CHECK(report::fixed(-0.006, 2) == "-0.01");
  CHECK(report::fixed(1234.5, 1) == "1234.5");
  CHECK(report::percent(0.2534) == "25.3%");
  CHECK(report::money(4'050'145.625000001) == 4'050'145.63);
  CHECK(report::general(0.05) == "0.05");
}

TEST_CASE("econ CSV has one row per period", "[report]") {
  const auto lines = lines_of(run(cli::Subcommand::EconNpv, "base_case.json", "csv"));
  REQUIRE(lines.size() == 25);
  CHECK(lines[0] == "period,cash_flow,discounted,cumulative");
  CHECK(lines[1].rfind("1,-70000", 0) == 0);
  CHECK(lines[24].rfind("24,", 0) == 0);
}

TEST_CASE("econ JSON carries the headline figures", "[report]") {
  const auto j = nlohmann::json::parse(run(cli::Subcommand::EconNpv, "base_case.json", "json"));
  CHECK_THAT(j.at("npv").get<double>(), WithinAbs(4'050'145.63, 0.005));
  CHECK_THAT(j.at("irr").get<double>(), WithinAbs(0.51356, 1e-4));
  CHECK(j.at("break_even_period") == 5);
  CHECK(j.at("break_even_mode") == "nominal");
  CHECK_FALSE(j.contains("delta_npv"));

  const auto w = nlohmann::json::parse(run(cli::Subcommand::EconScenario, "worst_case.json", "json"));
  CHECK(w.at("irr").is_null());
  CHECK(w.contains("delta_npv"));
  CHECK(w.contains("base_npv"));
}

TEST_CASE("ANC JSON holds the run parameters and trace", "[report]") {
  const auto j = nlohmann::json::parse(run(cli::Subcommand::AncSimulate, "anc_tone_2tap.json", "json"));
  for (const char* key : {"algorithm", "filter_length", "step_size", "leak_factor", "secondary_estimate",
                          "sample_rate_hz", "duration_samples", "rng_seed", "noise", "primary_taps",
                          "secondary_taps", "samples_simulated", "window_samples", "attenuation_trace_db",
                          "steady_state_attenuation_db", "diverged"}) {
    INFO(key);
    CHECK(j.contains(key));
  }
  CHECK(j.at("diverged") == false);
  CHECK(j.at("attenuation_trace_db").size() == 20);
  CHECK(j.at("steady_state_attenuation_db").get<double>() == j.at("attenuation_trace_db").back().get<double>());
}

TEST_CASE("ANC CSV lists every sample", "[report]") {
  const auto lines = lines_of(run(cli::Subcommand::AncSimulate, "anc_tone_2tap.json", "csv"));
  REQUIRE(lines.size() == 40001);
  CHECK(lines[0] == "n,disturbance,anti_noise,residual");
  CHECK(lines[1].rfind("0,", 0) == 0);
}

TEST_CASE("sensitivity table keeps the row set", "[report]") {
  const auto lines = lines_of(run(cli::Subcommand::EconSensitivity, "sensitivity_table52.json", "csv"));
  REQUIRE(lines.size() == 25);
  CHECK(lines[0] == "parameter,pct,periods,delta_pct,delta_npv");
  std::multiset<std::string> params;
  for (std::size_t i = 1; i < lines.size(); ++i) params.insert(lines[i].substr(0, lines[i].find(',')));
  for (const char* p : {"Development", "Testing", "Tooling and Ramp-Up Costs", "Market Introduction",
                        "Ongoing Marketing Costs", "Unit Sales", "Unit Price", "Unit Production Cost"}) {
    INFO(p);
    CHECK(params.count(p) == 3);
  }
  const auto table = run(cli::Subcommand::EconSensitivity, "sensitivity_table52.json", "table");
  CHECK_THAT(table, ContainsSubstring("-823271"));
}

TEST_CASE("cost report flags disagreements with printed figures", "[report]") {
  const auto j = nlohmann::json::parse(run(cli::Subcommand::CostBom, "cost_table14.json", "json"));
  bool flagged_assembly = false;
  for (const auto& d : j.at("discrepancies")) {
    if (d.at("cell") == "assembly_cost") flagged_assembly = d.at("flagged").get<bool>();
  }
  CHECK(flagged_assembly);
  const auto lines = lines_of(run(cli::Subcommand::CostBom, "cost_table14.json", "csv"));
  CHECK(lines[0] == "item,value,expected,discrepancy");
}

TEST_CASE("risk report marks unrated rows", "[report]") {
  const auto lines = lines_of(run(cli::Subcommand::PlanRisk, "risk_register.csv", "csv"));
  REQUIRE(lines.size() == 55);
  CHECK(lines[0] == "code,risk,category,probability,impact,score,quadrant");
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK_THAT(lines[i], ContainsSubstring("UNRATED"));
}

TEST_CASE("market report checks the stated profit", "[report]") {
  const auto j = nlohmann::json::parse(run(cli::Subcommand::PlanMarket, "market.json", "json"));
  CHECK(j.at("profit_discrepancy") == true);
}

TEST_CASE("every JSON key is snake_case", "[report][property]") {
  const std::regex snake("[a-z][a-z0-9_]*");
  for (const auto& job : kJobs) {
    std::set<std::string> keys;
    collect_keys(nlohmann::json::parse(run(job.sub, job.file, "json")), keys);
    for (const auto& k : keys) {
      INFO(job.file << ": " << k);
      CHECK(std::regex_match(k, snake));
    }
  }
}

TEST_CASE("no report prints negative zero", "[report][property]") {
  for (const auto& job : kJobs) {
    for (const char* f : {"table", "csv", "json"}) {
      const auto s = run(job.sub, job.file, f);
      INFO(job.file << " " << f);
      CHECK_FALSE(std::regex_search(s, std::regex(R"((^|[^0-9.])-0(\.0+)?([^0-9.]|$))")));
    }
  }
}

TEST_CASE("reports are byte-identical across runs", "[report][property]") {
  for (const auto& job : kJobs) {
    for (const char* f : {"table", "csv", "json"}) {
      INFO(job.file << " " << f);
      CHECK(run(job.sub, job.file, f) == run(job.sub, job.file, f));
    }
  }
}
