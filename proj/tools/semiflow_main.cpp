#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "semiflow/scenario.hpp"

namespace {

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("SEMIFLOW_OUT_DIR")) return env;
  return "out";
}

bool parse_override(const std::string& spec,
                    std::map<std::string, double>& into, std::string& err) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    err = "expected NAME=VALUE, got '" + spec + "'";
    return false;
  }
  try {
    size_t used = 0;
    const double v = std::stod(spec.substr(eq + 1), &used);
    if (used != spec.size() - eq - 1) throw std::invalid_argument(spec);
    into[spec.substr(0, eq)] = v;
  } catch (const std::exception&) {
    err = "bad slack value in '" + spec + "'";
    return false;
  }
  return true;
}

void report_outcome(const semiflow::ScenarioResult& r) {
  std::cout << r.name << ": exit " << r.exit_code;
  if (!r.message.empty()) std::cout << " (" << r.message << ")";
  std::cout << "\n";
  for (const auto& e : r.report.entries) {
    std::cout << "  " << (e.pass ? "pass" : "FAIL") << "  " << e.name
              << "  ratio " << e.ratio << " / slack " << e.slack << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradient-flow evolution scenarios: run, verify, report"};
  app.require_subcommand(1);

  std::string config;
  std::filesystem::path out_dir = default_out_dir();
  unsigned seed = 0;
  std::vector<std::string> overrides;
  std::string dump = "none";

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config) {
      cmd->add_option("--config", config, "scenario config (JSON)")
          ->required()
          ->check(CLI::ExistingFile);
    } else {
      cmd->add_option("--config", config, "suite manifest (JSON)")
          ->required();
    }
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "seed for randomized catalog entries");
    cmd->add_option("--slack-override", overrides,
                    "NAME=VALUE estimate slack override (repeatable)");
    cmd->add_option("--dump-states", dump, "none, final, or all")
        ->check(CLI::IsMember({"none", "final", "all"}));
  };

  CLI::App* cmd_run = app.add_subcommand("run", "single evolution scenario");
  CLI::App* cmd_pert =
      app.add_subcommand("perturbed", "fixed-point scenario (Picard)");
  CLI::App* cmd_dtn =
      app.add_subcommand("dtn", "boundary (Dirichlet-to-Neumann) scenario");
  CLI::App* cmd_verify =
      app.add_subcommand("verify", "run the bundled scenario suite");
  add_common(cmd_run, true);
  add_common(cmd_pert, true);
  add_common(cmd_dtn, true);
  add_common(cmd_verify, false);

  CLI11_PARSE(app, argc, argv);

  semiflow::RunOptions opt;
  opt.out_dir = out_dir;
  opt.seed = seed;
  opt.dump = dump == "all" ? semiflow::DumpStates::all
             : dump == "final" ? semiflow::DumpStates::final
                               : semiflow::DumpStates::none;
  for (const auto& spec : overrides) {
    std::string err;
    if (!parse_override(spec, opt.slack_overrides, err)) {
      std::cerr << "error: " << err << "\n";
      return 2;
    }
  }

  semiflow::ScenarioResult result;
  if (cmd_verify->parsed()) {
    result = semiflow::run_suite(config, opt);
    std::cout << "suite: exit " << result.exit_code
              << (result.message.empty() ? "" : " (" + result.message + ")")
              << "\n";
    return result.exit_code;
  }
  opt.expected_mode = cmd_run->parsed()    ? "run"
                      : cmd_pert->parsed() ? "perturbed"
                                           : "dtn";
  result = semiflow::run_scenario(config, opt);
  report_outcome(result);
  return result.exit_code;
}
