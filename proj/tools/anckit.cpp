#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anckit/cli.hpp"

namespace {

struct Leaf {
  std::string group;
  std::string name;
  std::string help;
};

const std::vector<Leaf> kLeaves = {
    {"anc", "simulate", "Run an adaptive noise-control simulation"},
    {"econ", "npv", "NPV, IRR and break-even of a cash-flow model"},
    {"econ", "scenario", "Evaluate a model with adjustments against its base"},
    {"econ", "sensitivity", "One-at-a-time sensitivity grid"},
    {"cost", "bom", "Bill-of-materials cost roll-up"},
    {"plan", "concept", "Weighted concept scoring"},
    {"plan", "risk", "Risk register scoring and mapping"},
    {"plan", "market", "Market size and profit estimate"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-control simulation and product planning toolkit"};
  app.require_subcommand(1);

  anckit::cli::Command cmd;
  std::string output;
  std::vector<std::pair<CLI::App*, const Leaf*>> leaves;

  for (const auto& leaf : kLeaves) {
    CLI::App* group = app.get_subcommand_no_throw(leaf.group);
    if (group == nullptr) {
      group = app.add_subcommand(leaf.group, leaf.group + " commands");
      group->require_subcommand(1);
    }
    CLI::App* sub = group->add_subcommand(leaf.name, leaf.help);
    sub->add_option("--config", cmd.config_path, "Config file (JSON, or CSV where accepted)")->required();
    sub->add_option("--format", cmd.format, "table, csv or json")->capture_default_str();
    sub->add_option("--output", output, "Write the report here instead of stdout");
    sub->add_flag("--require-irr", cmd.require_irr, "Exit 2 when the IRR is undefined");
    sub->add_flag("--discounted-breakeven", cmd.discounted_breakeven,
                  "Use discounted cumulative cash flow for break-even");
    leaves.emplace_back(sub, &leaf);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : anckit::cli::kExitValidation;
  }

  for (const auto& [sub, leaf] : leaves) {
    if (sub->parsed()) cmd.subcommand = *anckit::cli::parse_subcommand(leaf->group, leaf->name);
  }
  if (!output.empty()) cmd.output_path = output;
  return anckit::cli::run_command(cmd, std::cout, std::cerr);
}
