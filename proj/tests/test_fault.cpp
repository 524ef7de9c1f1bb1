// Linked against the fault-injection build of the core library, where
// flip_block_column leaves one coefficient un-negated. The verification
// suites must catch the defect and the CLI must turn it into exit code 1.

#include "doctest.h"
#include "oplab/cli.hpp"
#include "oplab/operators.hpp"
#include "oplab/verify.hpp"

using namespace oplab;

TEST_CASE("broken flip is visible in the operator algebra") {
  SpaceSpec s(Exponent::finite(2.0), {2, 2});
  const BlockOperator T = gen_operator(s, 3, 1.0);
  const BlockOperator F = flip_block_column(T, 0);
  // the injected fault leaves entry (1,1) of grid cell (1,1) unflipped
  CHECK(F.entry(0, 0)(0, 0) == T.entry(0, 0)(0, 0));
  CHECK(F.entry(0, 0)(1, 0) == -T.entry(0, 0)(1, 0));
}

TEST_CASE("suite_tong records violations against the broken flip") {
  SuiteParams params;
  params.cases = 40;
  params.seed = 5;
  params.ps = {Exponent::finite(1.0), Exponent::finite(2.0), Exponent::inf()};
  params.solver.restarts = 4;
  params.solver.max_iters = 500;
  const VerificationReport rep = suite_tong(params);
  CHECK(!rep.violations.empty());
  CHECK(rep.max_slack > 0.0);
}

TEST_CASE("violations set the process exit status through the CLI") {
  const int code = cli::run({"verify", "tong", "--p", "1,2", "--cases", "20",
                             "--seed", "5", "--restarts", "2", "--max-iters",
                             "300"});
  CHECK(code == 1);
}
