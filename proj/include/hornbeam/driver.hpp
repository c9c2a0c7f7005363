#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hornbeam {

// One full pipeline run: parse -> normalize -> lower -> analyze -> check ->
// render. Used by both the CLI and the integration tests.
struct RunRequest {
  std::string input_path;
  std::optional<std::string> source;  // inline text instead of a file
  std::string domain = "sign";
  std::string mode = "baseline";
  bool speed_up = false;
  std::vector<std::string> entries;  // overrides ":- entry" declarations
  std::string format = "text";
  bool validate = false;
  int oracle_depth = 8;
};

struct RunOutcome {
  // 0: completed, no false verdicts; 1: false verdicts; 2: usage or input
  // errors.
  int exit_code = 0;
  std::string report;
  std::vector<std::string> diagnostics;
};

RunOutcome run_analysis(const RunRequest& req);

// Debugging entry point for the concrete interpreter.
RunOutcome run_oracle_goal(const RunRequest& req, const std::string& goal_text,
                           int depth);

}  // namespace hornbeam
