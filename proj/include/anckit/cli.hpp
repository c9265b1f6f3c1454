#pragma once

// Command dispatch shared by the anckit executable and the tests.

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "anckit/config.hpp"
#include "anckit/report.hpp"

namespace anckit::cli {

enum class Subcommand {
  AncSimulate,
  EconNpv,
  EconScenario,
  EconSensitivity,
  CostBom,
  PlanConcept,
  PlanRisk,
  PlanMarket,
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitIo = 3;

struct Command {
  Subcommand subcommand = Subcommand::EconNpv;
  std::filesystem::path config_path;
  std::string format = "table";
  std::optional<std::filesystem::path> output_path;
  bool require_irr = false;
  bool discounted_breakeven = false;
};

namespace detail {

inline bool is_csv(const std::filesystem::path& p) { return p.extension() == ".csv"; }

struct Outcome {
  std::string report;
  std::optional<std::string> numerical_failure;
};

inline Outcome run_econ(const Command& cmd, report::Format f, bool compare) {
  const auto doc = config::read_json(cmd.config_path);
  const auto s = config::parse_scenario(doc, cmd.config_path);
  const auto r = econ::evaluate(s.base, s.adjustments, cmd.discounted_breakeven);
  Outcome o{report::emit_report(s.name, r, f, compare), std::nullopt};
  if (cmd.require_irr && !r.irr) o.numerical_failure = "irr: undefined (cash flows never change sign)";
  return o;
}

inline Outcome dispatch(const Command& cmd, report::Format f) {
  switch (cmd.subcommand) {
    case Subcommand::AncSimulate: {
      const auto job = config::parse_anc_job(config::read_json(cmd.config_path));
      const auto r = anc::anc_run(job.cfg, job.noise, job.primary, job.secondary);
      Outcome o{report::emit_report(job, r, f), std::nullopt};
      if (r.diverged) {
        o.numerical_failure = "anc: adaptive filter diverged after " + std::to_string(r.residual.size()) +
                              " samples (controller.step_size = " + report::general(job.cfg.step_size) + ")";
      }
      return o;
    }
    case Subcommand::EconNpv:
      return run_econ(cmd, f, false);
    case Subcommand::EconScenario:
      return run_econ(cmd, f, true);
    case Subcommand::EconSensitivity: {
      const auto doc = config::parse_sensitivity(config::read_json(cmd.config_path), cmd.config_path);
      return {report::emit_report(doc, report::run_sensitivity(doc), f), std::nullopt};
    }
    case Subcommand::CostBom: {
      config::CostDoc doc;
      if (is_csv(cmd.config_path)) {
        doc.name = cmd.config_path.stem().string();
        doc.bom = config::parse_bom(config::read_csv(cmd.config_path));
      } else {
        doc = config::parse_cost_doc(config::read_json(cmd.config_path), cmd.config_path);
      }
      return {report::emit_report(report::run_costing(doc), f), std::nullopt};
    }
    case Subcommand::PlanConcept: {
      std::filesystem::path csv_path = cmd.config_path;
      if (!is_csv(csv_path)) {
        const auto doc = config::read_json(cmd.config_path);
        csv_path = config::resolve(cmd.config_path, config::get_string(doc, "csv"));
      }
      const auto m = config::parse_concepts(config::read_csv(csv_path));
      return {report::emit_report(m, planning::concept_score(m), f), std::nullopt};
    }
    case Subcommand::PlanRisk: {
      std::filesystem::path csv_path = cmd.config_path;
      int threshold = planning::kDefaultRiskThreshold;
      if (!is_csv(csv_path)) {
        const auto doc = config::read_json(cmd.config_path);
        csv_path = config::resolve(cmd.config_path, config::get_string(doc, "csv"));
        if (doc.contains("threshold")) threshold = config::get_int(doc, "threshold");
        require(threshold >= 1 && threshold <= 10, "threshold", "must lie in 1..10");
      }
      return {report::emit_report(config::parse_risks(config::read_csv(csv_path)), threshold, f), std::nullopt};
    }
    case Subcommand::PlanMarket: {
      const auto doc = config::read_json(cmd.config_path);
      const auto p = config::parse_market(doc);
      std::optional<double> expected;
      if (doc.contains("expected_profit")) expected = config::get_number(doc, "expected_profit");
      return {report::emit_report(p, planning::market_size_estimate(p), expected, f), std::nullopt};
    }
  }
  throw ValidationError("subcommand", "unknown");
}

}  // namespace detail

inline std::optional<Subcommand> parse_subcommand(std::string_view group, std::string_view name) {
  if (group == "anc" && name == "simulate") return Subcommand::AncSimulate;
  if (group == "econ" && name == "npv") return Subcommand::EconNpv;
  if (group == "econ" && name == "scenario") return Subcommand::EconScenario;
  if (group == "econ" && name == "sensitivity") return Subcommand::EconSensitivity;
  if (group == "cost" && name == "bom") return Subcommand::CostBom;
  if (group == "plan" && name == "concept") return Subcommand::PlanConcept;
  if (group == "plan" && name == "risk") return Subcommand::PlanRisk;
  if (group == "plan" && name == "market") return Subcommand::PlanMarket;
  return std::nullopt;
}

/// Runs one command. The report goes to `cmd.output_path` when set, otherwise
/// to `out`; diagnostics go to `err`. A numerical failure still writes the
/// report before returning exit code 2.
inline int run_command(const Command& cmd, std::ostream& out, std::ostream& err) {
  detail::Outcome outcome;
  try {
    const report::Format f = report::parse_format(cmd.format);
    outcome = detail::dispatch(cmd, f);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << cmd.config_path.filename().string() << ": " << e.what() << "\n";
    return kExitValidation;
  }

  if (cmd.output_path) {
    std::ofstream file(*cmd.output_path, std::ios::binary | std::ios::trunc);
    file << outcome.report;
    file.flush();
    if (!file) {
      err << "error: cannot write '" << cmd.output_path->string() << "'\n";
      return kExitIo;
    }
  } else {
    out << outcome.report;
    out.flush();
  }

  if (outcome.numerical_failure) {
    err << "error: " << *outcome.numerical_failure << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace anckit::cli
