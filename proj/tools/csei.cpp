// Command-line front end: subcommands over the pipeline stages, a key=value
// config file, and one same-named override flag per config key.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "csei/csei.hpp"

namespace {

// 0 success, 1 stage error, 2 usage/config error (io counts as usage: the
// command was pointed at something that is not there).
int exit_code_for(csei::ErrorKind kind) {
  return kind == csei::ErrorKind::config || kind == csei::ErrorKind::io ? 2 : 1;
}

void print_error_record(const std::string& stage, const std::string& kind,
                        const std::string& message) {
  nlohmann::ordered_json rec;
  rec["error"]["stage"] = stage;
  rec["error"]["kind"] = kind;
  rec["error"]["message"] = message;
  std::cerr << rec.dump() << '\n';
}

// Per-subcommand option set. Flags the user did not pass leave no trace, so
// file values and built-in defaults shine through.
struct ConfigCli {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  bool plots = false;
  bool log_timestamps = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--config", config_path,
                   "key = value file applied before any flag");
    for (const csei::ConfigKeyDoc& doc : csei::kConfigKeys) {
      const std::string key = doc.key;
      if (key == "plots" || key == "log_timestamps") continue;
      cmd.add_option_function<std::string>(
          "--" + key,
          [this, key](const std::string& value) { overrides[key] = value; },
          doc.help);
    }
    // Bare flags; --plots=false still works for overriding a config file.
    plots_opt_ = cmd.add_flag("--plots", plots, "emit svg charts");
    log_opt_ = cmd.add_flag("--log_timestamps", log_timestamps,
                            "record wall-clock timestamps in run metadata");
  }

  csei::RunConfig resolve() {
    if (plots_opt_->count() > 0) overrides["plots"] = plots ? "true" : "false";
    if (log_opt_->count() > 0) {
      overrides["log_timestamps"] = log_timestamps ? "true" : "false";
    }
    csei::RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in = csei::open_input(config_path);
      for (const auto& [key, value] : csei::parse_config_file(in)) {
        csei::apply_config_entry(cfg, key, value);
      }
    }
    for (const auto& [key, value] : overrides) {
      csei::apply_config_entry(cfg, key, value);
    }
    csei::validate_config(cfg);
    return cfg;
  }

 private:
  CLI::Option* plots_opt_ = nullptr;
  CLI::Option* log_opt_ = nullptr;
};

void report_ingest(const csei::IngestOutputs& out) {
  std::cout << "ingest: " << out.counts.survivors << " of "
            << out.counts.ingested << " posts retained ("
            << out.malformed << " malformed rows skipped)\n";
}

void report_build(const csei::BuildOutputs& out) {
  std::cout << "build: " << out.features.dates.size() << " daily rows, "
            << out.outliers.removed_indices.size()
            << " outliers removed, weight sum "
            << csei::format_double(csei::weight_sum(out.weights)) << '\n';
}

void report_analyze(const csei::AnalyzeOutputs& out) {
  std::cout << "analyze: " << out.peaks.indices.size() << " peaks, "
            << out.valleys.indices.size() << " valleys, " << out.events_marked
            << " event days in series\n";
}

template <typename Fn>
int execute(const std::string& stage, ConfigCli& cli, Fn&& fn) {
  try {
    const csei::RunConfig cfg = cli.resolve();
    fn(cfg);
    return 0;
  } catch (const csei::StageError& e) {
    print_error_record(e.stage(), csei::to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const csei::Error& e) {
    print_error_record(stage, csei::to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    print_error_record(stage, "io", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error_record(stage, "internal", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"community sentiment and engagement index pipeline"};
  app.set_version_flag("--version", std::string("csei ") + csei::kVersion);
  app.require_subcommand(1);

  ConfigCli ingest_cli, build_cli, analyze_cli, run_cli, validate_cli;
  CLI::App* cmd_ingest = app.add_subcommand(
      "ingest", "parse, filter and clean posts into clean_posts.csv");
  ingest_cli.attach(*cmd_ingest);
  CLI::App* cmd_build = app.add_subcommand(
      "build", "score posts and emit features, outliers, weights and index");
  build_cli.attach(*cmd_build);
  CLI::App* cmd_analyze = app.add_subcommand(
      "analyze", "derive deltas, extrema, event stats and reports from index.csv");
  analyze_cli.attach(*cmd_analyze);
  CLI::App* cmd_run =
      app.add_subcommand("run", "ingest, build and analyze in one go");
  run_cli.attach(*cmd_run);
  CLI::App* cmd_validate = app.add_subcommand(
      "validate-config", "resolve and range-check the config, then print it");
  validate_cli.attach(*cmd_validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*cmd_ingest) {
    return execute("ingest", ingest_cli, [](const csei::RunConfig& cfg) {
      csei::OutputLock lock(cfg.output_dir);
      report_ingest(csei::run_ingest(cfg));
    });
  }
  if (*cmd_build) {
    return execute("build", build_cli, [](const csei::RunConfig& cfg) {
      csei::OutputLock lock(cfg.output_dir);
      report_build(csei::run_build(cfg));
    });
  }
  if (*cmd_analyze) {
    return execute("analyze", analyze_cli, [](const csei::RunConfig& cfg) {
      csei::OutputLock lock(cfg.output_dir);
      report_analyze(csei::run_analyze(cfg));
    });
  }
  if (*cmd_run) {
    return execute("run", run_cli, [](const csei::RunConfig& cfg) {
      csei::OutputLock lock(cfg.output_dir);
      report_ingest(csei::run_ingest(cfg));
      report_build(csei::run_build(cfg));
      report_analyze(csei::run_analyze(cfg));
    });
  }
  return execute("validate-config", validate_cli,
                 [](const csei::RunConfig& cfg) {
                   std::cout << csei::detail::config_snapshot(cfg).dump(2)
                             << '\n';
                 });
}
