#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pbicg/cli/commands.hpp"
#include "pbicg/cli/verify_suite.hpp"

namespace {

using namespace pbicg::cli;

struct RawCommon {
  std::string precond = "none";
  std::string rhs = "ones";
  std::string rhs_file;
};

void add_common(CLI::App* cmd, std::string& matrix, RawCommon& raw, double& tol, std::string& output) {
  cmd->add_option("--matrix", matrix,
                  "Matrix Market path or generator (gen:stencil:m:conv[:seed], gen:random:n:density:seed, "
                  "gen:identity:n)")
      ->required();
  cmd->add_option("--precond", raw.precond, "none or ilu0")->capture_default_str();
  cmd->add_option("--tol", tol, "relative residual tolerance")->capture_default_str();
  cmd->add_option("--rhs", raw.rhs, "ones (b = A*1), unit (b = e1) or file")->capture_default_str();
  cmd->add_option("--rhs-file", raw.rhs_file, "right-hand side values for --rhs file");
  cmd->add_option("--output,-o", output, "CSV destination, - for standard output")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preconditioned BiCG experiments: solve, compare and verify"};
  app.require_subcommand(1);

  ExperimentConfig solve_cfg;
  RawCommon solve_raw;
  std::string solve_isrv;
  std::size_t solve_max_iter = 0;
  auto* solve = app.add_subcommand("solve", "run one solver and write its iteration trace as CSV");
  add_common(solve, solve_cfg.matrix, solve_raw, solve_cfg.tol, solve_cfg.output);
  solve->add_option("--method", solve_cfg.method,
                    "bicg, bicg-conv-left, bicg-conv-right, bicg-conv-two, pbicg-right, pbicg-left, pbicg-std, "
                    "pbicg-impr2 or bicr; method:isrv is also accepted")
      ->capture_default_str();
  solve->add_option("--isrv", solve_isrv, "r0, isrv1, isrv2, isrv3, atr0 or custom:<matrix> (bicg and pbicg-std)");
  solve->add_option("--max-iter", solve_max_iter, "iteration cap (default 2n)");

  CompareConfig cmp_cfg;
  RawCommon cmp_raw;
  std::string cmp_series = "alphabeta";
  auto* compare = app.add_subcommand("compare", "run several variants and compare their traces");
  add_common(compare, cmp_cfg.matrix, cmp_raw, cmp_cfg.tol, cmp_cfg.output);
  compare->add_option("--variants", cmp_cfg.variants, "variants as method[:isrv], comma separated")
      ->required()
      ->delimiter(',');
  compare->add_option("--k-max", cmp_cfg.k_max, "iterations compared")->capture_default_str();
  compare->add_option("--series", cmp_series, "alphabeta or relres")->capture_default_str();
  compare->add_option("--agree", cmp_cfg.agree, "pairs within this relative deviation agree")->capture_default_str();
  compare->add_option("--differ", cmp_cfg.differ, "pairs beyond this relative deviation differ")
      ->capture_default_str();

  VerifyOptions ver_opt;
  auto* verify = app.add_subcommand("verify", "run the invariant checks on generated matrices");
  verify->add_option("--seed", ver_opt.seed, "generator seed")->capture_default_str();
  verify->add_option("--sizes", ver_opt.sizes, "stencil grid sizes, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  verify->add_flag("--inject-fault", ver_opt.inject_fault, "corrupt one recorded alpha (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_input_error;
  }

  if (*solve) {
    return guarded(std::cerr, [&] {
      solve_cfg.precond = parse_precond(solve_raw.precond);
      solve_cfg.rhs = parse_rhs(solve_raw.rhs);
      solve_cfg.rhs_path = solve_raw.rhs_file;
      if (solve_cfg.rhs == RhsMode::File && solve_cfg.rhs_path.empty()) throw InputError("--rhs file needs --rhs-file");
      const auto colon = solve_cfg.method.find(':');
      if (colon != std::string::npos) {
        if (!solve_isrv.empty()) throw InputError("give the ISRV either in --method or in --isrv, not both");
        solve_isrv = solve_cfg.method.substr(colon + 1);
        solve_cfg.method.resize(colon);
      }
      if (!solve_isrv.empty()) solve_cfg.isrv = solve_isrv;
      if (solve->count("--max-iter") > 0) solve_cfg.max_iter = solve_max_iter;
      return run_solve(solve_cfg, std::cout, std::cerr);
    });
  }
  if (*compare) {
    return guarded(std::cerr, [&] {
      cmp_cfg.precond = parse_precond(cmp_raw.precond);
      cmp_cfg.rhs = parse_rhs(cmp_raw.rhs);
      cmp_cfg.rhs_path = cmp_raw.rhs_file;
      if (cmp_cfg.rhs == RhsMode::File && cmp_cfg.rhs_path.empty()) throw InputError("--rhs file needs --rhs-file");
      cmp_cfg.series = parse_series(cmp_series);
      return run_compare(cmp_cfg, std::cout, std::cerr);
    });
  }
  return run_verify(ver_opt, std::cout, std::cerr);
}
