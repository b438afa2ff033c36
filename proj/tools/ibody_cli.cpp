// Command-line front end. Builds a JSON configuration and hands it to the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ibody/ibody.h"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;

struct Flags {
  std::string config_file;
  bool fast = false;
  bool full = false;
  std::optional<int> n;
  std::optional<double> eps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> grid_resolution;
  std::optional<int> planes;
  std::optional<int> subspaces;
  std::optional<std::string> m_angles;
  std::optional<std::string> out;
  std::optional<std::string> cache_dir;
  bool with_asymptotics = false;
  bool quiet = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_file, "JSON configuration file")->check(CLI::ExistingFile);
  auto* fast = cmd->add_flag("--fast", f.fast, "small grids, eps = 0.3");
  auto* full = cmd->add_flag("--full", f.full, "certification grids, eps = 0.1");
  fast->excludes(full);
  cmd->add_option("--n", f.n, "ambient dimension (>= 5)");
  cmd->add_option("--eps", f.eps, "bump radius in [0, 1); 0 gives the ball");
  cmd->add_option("--seed", f.seed, "64-bit seed");
  cmd->add_option("--grid-resolution", f.grid_resolution, "nodes per panel, or auto");
  cmd->add_option("--planes", f.planes, "random 2-planes in the convexity scan");
  cmd->add_option("--subspaces", f.subspaces, "random hyperplanes in the section scan");
  cmd->add_option("--m-angles", f.m_angles, "angles per plane, or auto");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--cache-dir", f.cache_dir, "operator cache directory (overrides IBODY_CACHE_DIR)");
  cmd->add_flag("--with-asymptotics", f.with_asymptotics, "verify: include the scaling experiment");
  cmd->add_flag("--quiet", f.quiet, "print nothing on success");
}

json auto_or_int(const std::string& v) {
  if (v == "auto") return "auto";
  std::size_t used = 0;
  const int value = std::stoi(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return value;
}

// defaults < preset < config file < flags
json build_config(const Flags& f) {
  json cfg = json::object();
  json file = json::object();
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    std::stringstream buf;
    buf << in.rdbuf();
    file = json::parse(buf.str());
    if (!file.is_object()) throw std::runtime_error("config file must contain a JSON object");
  }
  if (f.fast) cfg["preset"] = "fast";
  else if (f.full) cfg["preset"] = "full";
  else if (file.contains("preset")) cfg["preset"] = file["preset"];
  for (const auto& [key, value] : file.items())
    if (key != "preset") cfg[key] = value;
  if (f.n) cfg["n"] = *f.n;
  if (f.eps) cfg["eps"] = *f.eps;
  if (f.seed) cfg["seed"] = *f.seed;
  if (f.grid_resolution) cfg["grid_resolution"] = auto_or_int(*f.grid_resolution);
  if (f.planes) cfg["planes"] = *f.planes;
  if (f.subspaces) cfg["subspaces"] = *f.subspaces;
  if (f.m_angles) cfg["m_angles"] = auto_or_int(*f.m_angles);
  if (f.out) cfg["out"] = *f.out;
  if (f.cache_dir) cfg["cache_dir"] = *f.cache_dir;
  if (f.with_asymptotics) cfg["with_asymptotics"] = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certifies a convex body that is not an intersection body but whose hyperplane sections are."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ibody_version()));
  Flags flags;
  const char* commands[][2] = {{"verify", "full certification pipeline"},
                               {"scan-epsilon", "per-eps table and threshold bisection"},
                               {"asymptotics", "log-log scaling of the perturbation"},
                               {"export-body", "write body.json and body.csv"}};
  for (const auto& c : commands) add_flags(app.add_subcommand(c[0], c[1]), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string command;
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();

  std::string config;
  try {
    config = build_config(flags).dump();
  } catch (const std::exception& e) {
    std::cerr << "ibody: invalid configuration: " << e.what() << '\n';
    return 1;
  }

  ibody_result* result = nullptr;
  const ibody_status status = ibody_run(command.c_str(), config.c_str(), &result);
  if (status != IBODY_OK) {
    std::cerr << "ibody: " << ibody_status_string(status) << ": " << ibody_last_error() << '\n';
    return 1;
  }
  const int code = ibody_result_exit_code(result);
  if (!flags.quiet || code != 0) std::cout << command << ": " << ibody_result_summary(result) << '\n';
  ibody_result_destroy(result);
  return code;
}
