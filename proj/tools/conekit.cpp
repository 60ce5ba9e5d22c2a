// conekit: command-line runner for the experiments in libconekit.
//
//   conekit <command> [--config file.json] [--seed N] [--workers K]
//                     [--out dir] [--format json|csv] [--timing] [--<param> value ...]
//
// Parameter values are read as JSON when they parse ("[1, 2]", "true", "5")
// and as strings otherwise ("orthant(3)").
//
// Exit codes: 0 pass, 1 check failure, 2 usage error, 3 degenerate input,
// exhausted retry budget or discard rate above 1e-4.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <conekit/errors.hpp>
#include <conekit/experiment.hpp>

namespace {

constexpr int kUsage = 2;
constexpr int kDegenerate = 3;

nlohmann::json flag_value(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return text;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw conekit::InvalidArgument("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw conekit::InvalidArgument("cannot write '" + path.string() + "'");
}

std::string hyphenated(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo checks of conic integral geometry"};
  app.set_version_flag("--version", conekit::kVersion);

  std::string command;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out_dir;
  std::string format;
  bool timing = false;

  std::string commands;
  for (const auto& c : conekit::experiment_commands()) commands += (commands.empty() ? "" : ", ") + c;
  app.add_option("command", command, "One of: " + commands)->check(CLI::IsMember(conekit::experiment_commands()));
  app.add_option("--config", config, "JSON config with the command and its parameters")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Seed; required by every command that samples");
  app.add_option("--workers", workers, "Worker threads (results do not depend on it)")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", out_dir, "Directory for the report file");
  app.add_option("--format", format, "Report format: json or csv (stdout when --out is absent)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--timing", timing, "Record wall time in the report");

  std::map<std::string, std::string> params;
  for (const auto& key : conekit::experiment_parameters()) {
    std::string names = "--" + key;
    if (hyphenated(key) != key) names += ",--" + hyphenated(key);
    app.add_option(names, params[key], "Experiment parameter '" + key + "'");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  conekit::Report report;
  try {
    nlohmann::json overrides = nlohmann::json::object();
    if (!command.empty()) overrides["command"] = command;
    if (seed) overrides["seed"] = *seed;
    if (workers) overrides["workers"] = *workers;
    for (const auto& [key, value] : params)
      if (app.count("--" + key) > 0) overrides[key] = flag_value(value);

    const std::string text = config.empty() ? std::string() : read_file(config);
    const conekit::ExperimentSpec spec = conekit::parse_spec(text, config.empty() ? "config" : config, overrides);
    if (conekit::needs_seed(spec.command, spec.params) && !spec.seed) {
      std::cerr << "conekit: --seed is required for '" << spec.command << "'\n";
      return kUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    report = conekit::run(spec);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (timing) report.wall_seconds = seconds;

    const std::string fmt = format.empty() ? "json" : format;
    const std::string body = fmt == "csv" ? conekit::emit_csv(report) : conekit::emit_json(report);
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      write_file(std::filesystem::path(out_dir) / (spec.command + "." + fmt), body);
    }
    if (!format.empty() && out_dir.empty()) {
      std::cout << body;
    } else {
      std::cout << conekit::emit_table(report);
      if (!timing) std::cout << "wall time: " << seconds << " s\n";
    }
  } catch (const conekit::InvalidArgument& e) {
    std::cerr << "conekit: " << e.what() << "\n";
    return kUsage;
  } catch (const conekit::Error& e) {
    std::cerr << "conekit: " << e.what() << "\n";
    return kDegenerate;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "conekit: " << e.what() << "\n";
    return kUsage;
  }
  return conekit::exit_status(report);
}
