#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "jtrace/campaign.hpp"
#include "jtrace/errors.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

nlohmann::json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw jtrace::ConfigError("cannot read config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw jtrace::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

struct RunFlags {
  std::string config;
  std::string suites;
  std::string functions;
  std::uint64_t seeds = 0;
  std::uint64_t seed_base = 0;
  bool has_seed_base = false;
  std::string dims;
  std::string out;
  std::string format;
  unsigned workers = 0;
  double tol = -1.0;
};

int run(const RunFlags& flags) {
  nlohmann::json j = flags.config.empty() ? nlohmann::json::object() : read_config(flags.config);
  if (!j.is_object()) throw jtrace::ConfigError("config must be a JSON object");
  // Flags override the matching config fields.
  if (!flags.suites.empty()) j["suites"] = split_list(flags.suites);
  if (!flags.functions.empty()) j["functions"] = split_list(flags.functions);
  if (flags.seeds > 0 || flags.has_seed_base) {
    nlohmann::json seeds = j.value("seeds", nlohmann::json::object());
    if (!seeds.is_object()) seeds = {{"count", seeds}};
    if (flags.seeds > 0) seeds["count"] = flags.seeds;
    if (flags.has_seed_base) seeds["base"] = flags.seed_base;
    j["seeds"] = seeds;
  }
  if (!flags.dims.empty()) j["dims"] = flags.dims;
  if (!flags.out.empty() || !flags.format.empty()) {
    nlohmann::json output = j.value("output", nlohmann::json::object());
    if (!flags.out.empty()) output["path"] = flags.out;
    if (!flags.format.empty()) output["format"] = flags.format;
    j["output"] = output;
  }
  if (flags.workers > 0) j["workers"] = flags.workers;
  if (flags.tol >= 0.0) j["tolerances"] = {{"rel", flags.tol}};

  const jtrace::CampaignConfig config = jtrace::parse_config(j);
  const jtrace::CampaignSummary summary = jtrace::run_campaign(config, std::cout, std::cerr);
  std::cerr << jtrace::to_json(summary).dump() << '\n';
  return summary.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Jensen-type trace inequalities"};
  app.require_subcommand(1);

  RunFlags flags;
  auto* run_cmd = app.add_subcommand("run", "Run a verification campaign");
  run_cmd->add_option("--config", flags.config, "Campaign config (JSON)");
  run_cmd->add_option("--suites", flags.suites, "Comma-separated suite ids");
  run_cmd->add_option("--functions", flags.functions, "Comma-separated catalog functions");
  run_cmd->add_option("--seeds", flags.seeds, "Number of seeds");
  run_cmd->add_option("--seed-base", flags.seed_base, "First seed")
      ->each([&](const std::string&) { flags.has_seed_base = true; });
  run_cmd->add_option("--dims", flags.dims, "Dimension range a..b");
  run_cmd->add_option("--out", flags.out, "Report path");
  run_cmd->add_option("--format", flags.format, "json or csv");
  run_cmd->add_option("--workers", flags.workers, "Worker threads");
  run_cmd->add_option("--tol", flags.tol, "Relative tolerance");

  std::string suite;
  auto* describe_cmd = app.add_subcommand("describe", "Describe a suite");
  describe_cmd->add_option("suite", suite, "Suite id")->required();

  app.add_subcommand("version", "Print the version");
  auto* list_cmd = app.add_subcommand("suites", "List suite ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : jtrace::kExitConfig;
  }

  try {
    if (app.got_subcommand("version")) {
      std::cout << "jtrace " << kVersion << '\n';
      return 0;
    }
    if (app.got_subcommand(list_cmd)) {
      for (const auto& id : jtrace::suite_ids()) std::cout << id << '\n';
      return 0;
    }
    if (app.got_subcommand(describe_cmd)) {
      std::cout << jtrace::describe(suite);
      return 0;
    }
    return run(flags);
  } catch (const jtrace::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return jtrace::kExitConfig;
  }
}
