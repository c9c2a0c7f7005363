// Command-line driver: analyze CHC programs, check assertions, and poke the
// concrete interpreter.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hornbeam/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hornbeam: assertion-guided abstract interpretation of CHC programs"};
  app.require_subcommand(1);

  hornbeam::RunRequest req;
  std::string out_path;

  CLI::App* analyze = app.add_subcommand("analyze", "analyze a program");
  analyze->add_option("input", req.input_path, "program file")->required();
  analyze->add_option("--domain", req.domain, "abstract domain: sign | intervals")
      ->default_val("sign");
  analyze->add_option("--mode", req.mode, "analysis mode: baseline | guided")
      ->default_val("baseline");
  analyze->add_flag("--speedup", req.speed_up,
                    "use assertions to generalize instead of refine");
  analyze->add_option("--entry", req.entries,
                      "initial query, e.g. \"fact(X,R) : int(X)\" (repeatable; "
                      "overrides :- entry declarations)");
  analyze->add_option("--format", req.format, "report format: text | json")
      ->default_val("text");
  analyze->add_flag("--validate", req.validate,
                    "replay entries on the concrete interpreter and check "
                    "coverage of the analysis result");
  analyze->add_option("--oracle-depth", req.oracle_depth,
                      "depth bound for --validate")
      ->default_val(8);
  analyze->add_option("--out", out_path, "write the report to a file");

  std::string goal;
  int depth = 8;
  CLI::App* oracle = app.add_subcommand("oracle", "run the concrete interpreter");
  oracle->add_option("input", req.input_path, "program file")->required();
  oracle->add_option("--goal", goal, "goal atom, e.g. \"fact(3,R)\"")->required();
  oracle->add_option("--depth", depth, "derivation depth bound")->default_val(8);

  CLI11_PARSE(app, argc, argv);

  hornbeam::RunOutcome outcome;
  if (analyze->parsed())
    outcome = hornbeam::run_analysis(req);
  else
    outcome = hornbeam::run_oracle_goal(req, goal, depth);

  for (const std::string& d : outcome.diagnostics) std::cerr << d << "\n";
  if (!out_path.empty() && analyze->parsed()) {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    f << outcome.report;
  } else {
    std::cout << outcome.report;
  }
  return outcome.exit_code;
}
