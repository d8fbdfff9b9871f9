// Batch driver: rydstirap --scenario <file.json> --out <dir>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rydstirap/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Rydberg-blockade STIRAP simulator"};
  std::string scenario_path;
  std::string out_dir;
  app.add_option("--scenario", scenario_path, "scenario JSON file")->required();
  app.add_option("--out", out_dir, "output directory")->required();
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(scenario_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << scenario_path << "\n";
    return 1;
  }
  std::stringstream text;
  text << in.rdbuf();

  try {
    const auto scenario = rydstirap::parse_scenario(text.str());
    return rydstirap::run_scenario(scenario, out_dir, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << scenario_path << ": " << e.what() << "\n";
    return 2;
  }
}
