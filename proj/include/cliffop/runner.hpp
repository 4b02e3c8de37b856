#pragma once
// Batch front end: parse a JSON run config, execute the named pipeline,
// write CSV/JSON artifacts plus a manifest (config hash, version, seed; no
// timestamps).  Exit codes: 0 success, 2 validation error, 3 divergence.

#include <string>
#include <vector>

#include <json.hpp>

#include "cliffop/grid.hpp"

namespace cliffop {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kOutputDirEnv = "CLIFFOP_OUTPUT_DIR";

struct RunResult {
  int exit_code = 0;
  std::string message;
  std::vector<std::string> outputs;  // paths written, in order
};

std::string default_output_dir();  // $CLIFFOP_OUTPUT_DIR or "out"

// manufactured scalar families for potentials and pipeline inputs:
// exp-bilinear phi = exp(c x1 x2); exp-linear phi = exp(c x1);
// gaussian phi = exp(-c |x|^2); sine phi = 1 + c sin(pi x1) sin(pi x2)
CliffordField manufactured_phi(const std::string& family, double coeff,
                               const GridSpec& g);
// the analytically sampled potential V = -(Delta phi)/phi of the family
CliffordField manufactured_potential(const std::string& family, double coeff,
                                     const GridSpec& g);

RunResult run_config_json(const nlohmann::json& cfg,
                          const std::string& output_dir, int threads);
RunResult run_config_file(const std::string& path,
                          const std::string& output_override, int threads);
RunResult run_study(const std::string& case_name,
                    const std::vector<int>& levels,
                    const std::string& output_dir);

}  // namespace cliffop
