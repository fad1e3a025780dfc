#pragma once

#include "covbound/pipeline.hpp"

#include <filesystem>
#include <string>

namespace covbound::testing {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("covbound-test-" + name);
  std::filesystem::create_directories(dir);
  return dir;
}

inline RunConfig solver_config(const std::string& name) {
  RunConfig config;
  config.solver.command = COVBOUND_TEST_SOLVER;
  config.solver.timeoutSeconds = 600;
  config.workDir = scratch_dir(name);
  return config;
}

inline InstanceOutcome solve(int q, int n, int r, std::vector<InequalitySet> ineqs,
                             ObjectiveKind kind = ObjectiveKind::triple,
                             const std::string& name = "solve") {
  InstanceRequest req;
  req.q = q;
  req.n = n;
  req.r = r;
  req.objective = kind;
  req.ineqs = std::move(ineqs);
  return run_instance(req, solver_config(name));
}

}  // namespace covbound::testing
