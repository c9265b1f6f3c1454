#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "anckit/cli.hpp"

using namespace anckit;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

const std::string kData = ANCKIT_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(cli::Command cmd) {
  std::ostringstream out, err;
  const int code = cli::run_command(cmd, out, err);
  return {code, out.str(), err.str()};
}

cli::Command command(cli::Subcommand sub, const std::string& file, const std::string& format = "table") {
  cli::Command cmd;
  cmd.subcommand = sub;
  cmd.config_path = file.empty() || file[0] == '/' ? fs::path(file) : fs::path(kData) / file;
  cmd.format = format;
  return cmd;
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / "anckit_cli_test";
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("subcommand names", "[cli]") {
  CHECK(cli::parse_subcommand("anc", "simulate") == cli::Subcommand::AncSimulate);
  CHECK(cli::parse_subcommand("econ", "sensitivity") == cli::Subcommand::EconSensitivity);
  CHECK(cli::parse_subcommand("plan", "market") == cli::Subcommand::PlanMarket);
  CHECK_FALSE(cli::parse_subcommand("econ", "simulate"));
}

TEST_CASE("successful commands exit 0 and print the report", "[cli]") {
  const auto r = run(command(cli::Subcommand::EconNpv, "base_case.json"));
  CHECK(r.code == cli::kExitOk);
  CHECK_THAT(r.out, ContainsSubstring("PROJECT NPV $ 4050146"));
  CHECK(r.err.empty());
}

TEST_CASE("validation failures exit 1 and name the field", "[cli][validation]") {
  const auto bad = run(command(cli::Subcommand::PlanConcept, "concept_bad_weights.csv"));
  CHECK(bad.code == cli::kExitValidation);
  CHECK(bad.out.empty());
  CHECK_THAT(bad.err, ContainsSubstring("weights"));

  const auto fmt = run(command(cli::Subcommand::EconNpv, "base_case.json", "yaml"));
  CHECK(fmt.code == cli::kExitValidation);
  CHECK_THAT(fmt.err, ContainsSubstring("format"));

  TempDir dir;
  auto doc = config::read_json(kData + "/anc_tone_2tap.json");
  doc.erase("rng_seed");
  std::ofstream(dir.path / "no_seed.json") << doc.dump();
  const auto seed = run(command(cli::Subcommand::AncSimulate, (dir.path / "no_seed.json").string()));
  CHECK(seed.code == cli::kExitValidation);
  CHECK_THAT(seed.err, ContainsSubstring("rng_seed"));

  std::ofstream(dir.path / "broken.json") << "{\"name\": ";
  const auto syntax = run(command(cli::Subcommand::EconNpv, (dir.path / "broken.json").string()));
  CHECK(syntax.code == cli::kExitValidation);
  CHECK_THAT(syntax.err, ContainsSubstring("broken.json"));
}

TEST_CASE("unreadable input exits 3", "[cli][io]") {
  const auto r = run(command(cli::Subcommand::EconNpv, "no_such_file.json"));
  CHECK(r.code == cli::kExitIo);
  CHECK_THAT(r.err, ContainsSubstring("no_such_file.json"));
}

TEST_CASE("unwritable output exits 3", "[cli][io]") {
  auto cmd = command(cli::Subcommand::EconNpv, "base_case.json");
  cmd.output_path = fs::path(kData) / "missing_dir" / "out.txt";
  CHECK(run(cmd).code == cli::kExitIo);
}

TEST_CASE("output path receives the report", "[cli]") {
  TempDir dir;
  auto cmd = command(cli::Subcommand::EconNpv, "base_case.json", "csv");
  const auto direct = run(cmd);
  cmd.output_path = dir.path / "report.csv";
  const auto r = run(cmd);
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.empty());
  CHECK(slurp(dir.path / "report.csv") == direct.out);
}

TEST_CASE("divergence exits 2 after writing the report", "[cli][numerical]") {
  TempDir dir;
  auto cmd = command(cli::Subcommand::AncSimulate, "anc_diverge.json", "json");
  cmd.output_path = dir.path / "diverge.json";
  const auto r = run(cmd);
  CHECK(r.code == cli::kExitNumerical);
  CHECK_THAT(r.err, ContainsSubstring("diverged"));
  const auto j = nlohmann::json::parse(slurp(dir.path / "diverge.json"));
  CHECK(j.at("diverged") == true);
  CHECK(j.at("samples_simulated").get<int>() < j.at("duration_samples").get<int>());
}

TEST_CASE("--require-irr turns an undefined IRR into exit 2", "[cli][numerical]") {
  auto cmd = command(cli::Subcommand::EconScenario, "worst_case.json", "json");
  CHECK(run(cmd).code == cli::kExitOk);
  cmd.require_irr = true;
  const auto r = run(cmd);
  CHECK(r.code == cli::kExitNumerical);
  CHECK(nlohmann::json::parse(r.out).at("irr").is_null());
  cmd.config_path = fs::path(kData) / "best_case.json";
  CHECK(run(cmd).code == cli::kExitOk);
}

TEST_CASE("--discounted-breakeven switches the break-even rule", "[cli]") {
  auto cmd = command(cli::Subcommand::EconNpv, "base_case.json", "json");
  const auto nominal = nlohmann::json::parse(run(cmd).out);
  cmd.discounted_breakeven = true;
  const auto discounted = nlohmann::json::parse(run(cmd).out);
  CHECK(nominal.at("break_even_period") == 5);
  CHECK(discounted.at("break_even_period") == 6);
  CHECK(discounted.at("break_even_mode") == "discounted");
}

TEST_CASE("planning commands accept JSON wrappers", "[cli]") {
  TempDir dir;
  std::ofstream(dir.path / "concept.json") << R"({"csv": ")" << kData << R"(/concept_table6.csv"})";
  std::ofstream(dir.path / "risk.json") << R"({"csv": ")" << kData << R"(/risk_register.csv", "threshold": 6})";
  std::ofstream(dir.path / "risk_bad.json") << R"({"csv": ")" << kData << R"(/risk_register.csv", "threshold": 0})";
  const auto c = run(command(cli::Subcommand::PlanConcept, (dir.path / "concept.json").string(), "csv"));
  CHECK(c.code == cli::kExitOk);
  CHECK(c.out == run(command(cli::Subcommand::PlanConcept, "concept_table6.csv", "csv")).out);
  CHECK(run(command(cli::Subcommand::PlanRisk, (dir.path / "risk.json").string())).code == cli::kExitOk);
  const auto bad = run(command(cli::Subcommand::PlanRisk, (dir.path / "risk_bad.json").string()));
  CHECK(bad.code == cli::kExitValidation);
  CHECK_THAT(bad.err, ContainsSubstring("threshold"));
}

TEST_CASE("a bare BOM CSV is costed without shipment or warranty", "[cli]") {
  const auto r = run(command(cli::Subcommand::CostBom, "bom_table14.csv", "json"));
  REQUIRE(r.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("name") == "bom_table14");
  CHECK(j.at("shipment") == 0.0);
  CHECK(j.at("total_direct") == 106.96);
  CHECK(j.at("total_manufacturing") == 120.50);
}
