#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tabtext/errors.hpp"
#include "tabtext/orchestrator.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string backend;  // "", "scripted" or "http"
  std::optional<double> tau_release;
  std::optional<long> seed;
};

void add_common_flags(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--config", opts.config_path, "run configuration file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--backend", opts.backend, "override backend kind")
      ->check(CLI::IsMember({"scripted", "http"}));
  cmd->add_option("--tau-release", opts.tau_release, "override the release threshold");
  cmd->add_option("--seed", opts.seed, "override the sampling seed");
}

tabtext::RunConfig load_config(const CliOptions& opts) {
  tabtext::RunConfig config = tabtext::RunConfig::from_file(opts.config_path);
  if (opts.backend == "scripted") {
    config.backend.kind = tabtext::BackendKind::scripted;
  } else if (opts.backend == "http") {
    config.backend.kind = tabtext::BackendKind::http_openai_compatible;
  }
  if (opts.tau_release) config.tau_release = *opts.tau_release;
  if (opts.seed) config.seed = *opts.seed;
  config.backend.validate();
  return config;
}

int run_stages(const CliOptions& opts, const std::vector<tabtext::Stage>& stages) {
  tabtext::RunConfig config = load_config(opts);
  if (!stages.empty()) config.stages = stages;
  const tabtext::RunManifest manifest = tabtext::run(config);
  std::cout << "run " << manifest.run_id << " complete; manifest at "
            << (config.output_dir / "manifest.json").string() << "\n";
  int exit_code = 0;
  for (const auto& [name, record] : manifest.stages) {
    std::cout << "  " << name << ": " << record.status;
    if (!record.failures.empty()) std::cout << " (" << record.failures.size() << " failures)";
    std::cout << "\n";
    if (record.status != "ok") exit_code = 1;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Table-to-text benchmark generation and extraction scoring"};
  app.require_subcommand(1);

  CliOptions opts;
  std::vector<std::pair<std::string, std::vector<tabtext::Stage>>> commands = {
      {"run", {}},
      {"plan", {tabtext::Stage::plan}},
      {"generate", {tabtext::Stage::generate}},
      {"validate", {tabtext::Stage::validate}},
      {"judge", {tabtext::Stage::judge}},
      {"filter", {tabtext::Stage::filter}},
      {"extract", {tabtext::Stage::extract}},
      {"score", {tabtext::Stage::score}},
  };
  for (auto& [name, stages] : commands) {
    CLI::App* cmd = app.add_subcommand(
        name, name == "run" ? "run the configured stages end to end"
                            : "run only the " + name + " stage");
    add_common_flags(cmd, opts);
    cmd->callback([&opts, &stages] { std::exit(run_stages(opts, stages)); });
  }
  CLI::App* summary = app.add_subcommand("summary", "rebuild summary files from artifacts");
  add_common_flags(summary, opts);
  summary->callback([&opts] {
    tabtext::RunConfig config = load_config(opts);
    tabtext::emit_summary(config);
    std::cout << (config.output_dir / "summary.txt").string() << "\n";
    std::exit(0);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const tabtext::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
