// Command-line front end: `run` and `verify`.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "mhdbl/mhdbl.hpp"

namespace {

std::optional<mhdbl::RunConfig> load(const std::string& path, const std::string& outDir,
                                     const std::optional<std::uint64_t>& seed) {
  try {
    mhdbl::RunConfig c = path.empty() ? mhdbl::RunConfig{} : mhdbl::load_config(path);
    if (!outDir.empty()) c.outputDir = outDir;
    if (seed) c.seed = *seed;
    return c;
  } catch (const mhdbl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D MHD boundary-layer solver and verification harness"};
  app.require_subcommand(1);

  std::string config, outDir, suite;
  std::optional<std::uint64_t> seed;
  app.add_option("--output-dir", outDir, "override output_dir from the config");
  app.add_option("--seed", seed, "override seed from the config");

  auto* run = app.add_subcommand("run", "evolve the configured initial data");
  run->add_option("--config", config, "flat JSON config file")->required();

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("suite", suite,
                     "oracle-heat, mms, mms-space, mms-time, cancellation, good-unknowns, "
                     "boundary, commutator, hardy, trace, energy or all")
      ->required();
  verify->add_option("--config", config, "flat JSON config file (defaults if omitted)");

  // Options given after the subcommand belong to the subcommand.
  for (auto* sub : {run, verify}) {
    sub->add_option("--output-dir", outDir, "override output_dir from the config");
    sub->add_option("--seed", seed, "override seed from the config");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mhdbl::kExitBadInput;
  }

  const auto cfg = load(config, outDir, seed);
  if (!cfg) return mhdbl::kExitBadInput;
  if (*run) return mhdbl::cmd_run(*cfg, std::cout, std::cerr);
  return mhdbl::cmd_verify(suite, *cfg, std::cout, std::cerr);
}
