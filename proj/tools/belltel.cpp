// belltel: run telegraph experiments and write reproducible reports.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "belltel/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bell telegraph simulator"};
  std::string command;
  std::string config_path;
  app.add_option("command", command, "simulate | plan | transmit | nosignal-check | paradox | distributions")
      ->required();
  app.add_option("-c,--config", config_path, "flat key: value config file");

  // One flag per config key; flags override the file.
  std::map<std::string, std::string> flag_values;
  for (const auto& key : belltel::config_keys())
    app.add_option("--" + key, flag_values[key], "override config key '" + key + "'");

  CLI11_PARSE(app, argc, argv);

  std::map<std::string, std::string> overrides;
  for (const auto& key : belltel::config_keys())
    if (app.get_option("--" + key)->count() > 0) overrides[key] = flag_values[key];

  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot read config " << config_path << "\n";
        return 2;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    const auto cfg = belltel::parse_config(text, overrides);
    return belltel::run_command(command, cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
