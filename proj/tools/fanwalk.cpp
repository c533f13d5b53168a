#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fanwalk/cli.hpp"

namespace {

void add_solve_flags(CLI::App* cmd, fanwalk::cli::SolveFlags& f) {
  cmd->add_option("--seed", f.seed, "base RNG seed")->default_val(0);
  cmd->add_option("--steps", f.steps, "walk steps per level (integer or auto)")->default_val("auto");
  cmd->add_option("--step-constant", f.step_constant, "C in ceil(C n^5.5 / delta^3)")->default_val(1.0);
  cmd->add_option("--alpha", f.alpha, "target scale (real or auto = 4 n^3 / delta)")->default_val("auto");
  cmd->add_option("--delta", f.delta, "real, brute, bound or auto")->default_val("auto");
  cmd->add_option("--radius", f.radius, "bounding box radius (real or auto)")->default_val("auto");
  cmd->add_option("--max-retries", f.max_retries, "fresh-seed retries per level")->default_val(10);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fanwalk::cli;
  CLI::App app{"Random-walk simplex solver on the normal fan"};
  app.require_subcommand(1);

  std::string input;
  SolveFlags flags;

  auto* solve = app.add_subcommand("solve", "solve an LP file and print a report");
  solve->add_option("--input", input, "LP file (JSON)")->required();
  add_solve_flags(solve, flags);
  solve->add_option("--trace", flags.trace, "write walk steps as line-delimited JSON");

  std::string method = "brute";
  auto* verify = app.add_subcommand("verify-delta", "certify the delta-distance constant");
  verify->add_option("--input", input, "LP file (JSON)")->required();
  verify->add_option("--method", method, "brute or bound")->default_val("brute");

  std::uint64_t seeds = 1;
  std::string manifest;
  auto* stats = app.add_subcommand("walk-stats", "aggregate solver counters over many seeds");
  stats->add_option("--input", input, "LP file (JSON)")->required();
  stats->add_option("--seeds", seeds, "number of consecutive seeds")->default_val(1);
  stats->add_option("--manifest", manifest, "JSON array of LP files for a per-m table");
  add_solve_flags(stats, flags);

  std::string kind = "box";
  fanwalk::Index n = 2;
  fanwalk::Index m = 4;
  std::uint64_t gen_seed = 0;
  bool rotate = false;
  auto* gen = app.add_subcommand("generate", "print a generated test instance");
  gen->add_option("--kind", kind, "box, interval or network")->default_val("box");
  gen->add_option("--n", n, "dimension")->default_val(2);
  gen->add_option("--m", m, "number of rows")->default_val(4);
  gen->add_option("--seed", gen_seed, "generator seed")->default_val(0);
  gen->add_flag("--rotate", rotate, "apply a random rotation (drops integrality)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cout << dump(error_json("InvalidInput", e.what())) << "\n";
    return kExitError;
  }

  CommandResult r;
  if (*solve) {
    r = run_solve(input, flags);
  } else if (*verify) {
    r = run_verify_delta(input, method);
  } else if (*stats) {
    r = run_walk_stats(input, seeds, flags, manifest.empty() ? std::nullopt : std::optional<std::filesystem::path>(manifest));
  } else {
    r = run_generate(kind, n, m, gen_seed, rotate);
  }
  std::cout << r.out;
  return r.exit_code;
}
