// cliffop: batch driver for the Clifford-analytic operator toolkit.
//   cliffop run <config.json> [--threads N] [--output DIR]
//   cliffop study --case <name> --levels 16,32,64 [--output DIR]

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cliffop/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Clifford-analytic operator toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int threads = 0;
  CLI::App* run = app.add_subcommand("run", "execute a JSON run config");
  run->add_option("config", config_path, "path to the run config JSON")
      ->required();
  run->add_option("--threads", threads, "worker thread cap (0 = hardware)");
  run->add_option("--output", output_dir,
                  "output directory (overrides config and environment)");

  std::string case_name;
  std::string levels_arg = "16,32,64";
  std::string study_output;
  CLI::App* study = app.add_subcommand("study", "grid refinement study");
  study->add_option("--case", case_name, "study case name")->required();
  study->add_option("--levels", levels_arg, "comma-separated cell counts");
  study->add_option("--output", study_output, "output directory");

  CLI11_PARSE(app, argc, argv);

  cliffop::RunResult res;
  if (run->parsed()) {
    res = cliffop::run_config_file(config_path, output_dir, threads);
  } else {
    std::vector<int> levels;
    std::string tok;
    for (char ch : levels_arg + ",") {
      if (ch == ',') {
        if (!tok.empty()) {
          try {
            levels.push_back(std::stoi(tok));
          } catch (const std::exception&) {
            std::fprintf(stderr, "error: bad level \"%s\"\n", tok.c_str());
            return 2;
          }
          tok.clear();
        }
      } else {
        tok += ch;
      }
    }
    std::string dir =
        study_output.empty() ? cliffop::default_output_dir() : study_output;
    res = cliffop::run_study(case_name, levels, dir);
  }

  for (const auto& p : res.outputs) std::printf("wrote %s\n", p.c_str());
  if (!res.message.empty())
    std::fprintf(stderr, "error: %s\n", res.message.c_str());
  if (res.exit_code == 3)
    std::fprintf(stderr, "iteration diverged (exit 3)\n");
  return res.exit_code;
}
