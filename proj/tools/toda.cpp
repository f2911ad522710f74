#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "toda/fuchsian.hpp"
#include "toda/scenario.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitFatal = 2;

struct Flags {
  std::string config;
  std::string out = ".";
  int threads = 1;
  std::vector<std::string> tolerances;
};

void add_flags(CLI::App& verb, Flags& flags) {
  verb.add_option("--config", flags.config, "Scenario config (JSON)")->required()->envname("TODA_CONFIG");
  verb.add_option("--out", flags.out, "Output directory")->envname("TODA_OUT");
  verb.add_option("--threads", flags.threads, "Worker threads")->check(CLI::Range(1, 1024))->envname("TODA_THREADS");
  verb.add_option("--tolerance", flags.tolerances, "Override a tolerance, NAME=VALUE (repeatable)")
      ->envname("TODA_TOLERANCE")
      ->delimiter(',');
}

toda::ScenarioConfig load(const Flags& flags) {
  auto config = toda::load_config(flags.config);
  for (const auto& t : flags.tolerances) toda::set_tolerance(config, t);
  return config;
}

void print_checks(const toda::ScenarioResult& result) {
  for (const auto& c : result.report.checks) {
    std::printf("%-11s %-7s residual %.3e  tolerance %.3e", c.name.c_str(), toda::to_string(c.status).c_str(),
                c.max_residual, c.tolerance);
    if (!c.message.empty()) std::printf("  (%s)", c.message.c_str());
    std::printf("\n");
  }
}

int run_check(const Flags& flags) {
  const auto config = load(flags);
  const auto result = toda::run_scenario(config, {flags.threads});
  toda::emit_outputs(result, config, flags.out);
  print_checks(result);
  const bool passed = result.report.all_passed();
  std::printf("%s: %zu checks, report %s\n", passed ? "PASS" : "FAIL", result.report.checks.size(),
              (std::filesystem::path(flags.out) / config.output.report).string().c_str());
  return passed ? kExitPass : kExitFail;
}

int run_normalize(const Flags& flags) {
  const auto config = load(flags);
  const auto prepared = toda::prepare_seed(config);
  const auto path =
      toda::write_output(flags.out, config.output.normalized_seed, toda::normalized_seed_json(prepared, config).dump(2) + "\n");
  std::printf("defect %.3e -> %.3e, written %s\n", prepared.raw_defect, prepared.defect, path.string().c_str());
  return kExitPass;
}

int run_fuchsian(const Flags& flags) {
  const auto config = load(flags);
  const auto prepared = toda::prepare_seed(config);
  toda::FuchsianOptions options;
  options.trace_tolerance = config.tolerances.at("trace");
  const auto op = toda::reconstruct(prepared.seed, options);
  const auto path = toda::write_output(flags.out, config.output.operator_file,
                                       toda::operator_json(op, prepared.seed).dump(2) + "\n");
  std::printf("order %d operator, written %s\n", op.n + 1, path.string().c_str());
  return kExitPass;
}

int run_grid(const Flags& flags) {
  auto config = load(flags);
  config.tasks = {"metric-grid"};
  const auto result = toda::run_scenario(config, {flags.threads});
  toda::emit_outputs(result, config, flags.out);
  print_checks(result);
  return result.report.all_passed() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toda system solutions from holomorphic seed data, with numerical verification"};
  app.require_subcommand(1);
  Flags flags;
  auto* check = app.add_subcommand("check", "Run the configured tasks and write the report");
  auto* normalize = app.add_subcommand("normalize", "Write the normalized seed as a loadable config");
  auto* fuchsian = app.add_subcommand("fuchsian", "Write the reconstructed operator coefficients");
  auto* grid = app.add_subcommand("grid", "Write the metric grid only");
  for (auto* verb : {check, normalize, fuchsian, grid}) add_flags(*verb, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitFatal;
  }

  try {
    if (*check) return run_check(flags);
    if (*normalize) return run_normalize(flags);
    if (*fuchsian) return run_fuchsian(flags);
    return run_grid(flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
}
