#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oplab/norms.hpp"

namespace oplab {

struct Violation {
  std::uint64_t case_seed;
  std::string desc;
  double slack;  // amount by which the check failed beyond its tolerance
};

// Outcome of one randomized property suite. max_slack tracks the largest
// (measured - allowed) over every check, so it is <= 0 exactly when the
// violation list is empty.
struct VerificationReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::int64_t cases = 0;
  std::vector<Violation> violations;
  double max_slack = 0.0;
  double wall_time_s = 0.0;
};

// Per-case summary for the CSV output (one row per case).
struct CaseRow {
  std::int64_t case_index;
  std::uint64_t case_seed;
  std::int64_t checks;
  std::int64_t violations;
  double max_slack;
};

enum class Ensemble {
  uniform,    // entries i.i.d. uniform on [-scale, scale]
  heavy_tail  // entries scale * tan(pi (u - 1/2)); stresses tie-breaking
};

struct SuiteParams {
  std::int64_t cases = 1000;
  std::uint64_t seed = 0;
  std::int32_t m_max = 4;        // blocks per generated space
  std::int32_t n_max = 3;        // coordinates per block
  std::int32_t embed_n_max = 8;  // vector length bound in suite_embedding
  std::vector<Exponent> ps = {Exponent::finite(1.0), Exponent::finite(2.0),
                              Exponent::inf()};
  SolverConfig solver;
  Ensemble ensemble = Ensemble::uniform;
  std::optional<std::int64_t> only_case;  // replay one case in isolation
  std::int32_t chain_m = 8;               // suite_chain truncation size
  Exponent chain_p = Exponent::finite(2.0);
};

// Seeded i.i.d. operator; the same (spec, seed, scale) always reproduces the
// same grid, entry for entry.
BlockOperator gen_operator(const SpaceSpec& spec, std::uint64_t seed,
                           double scale);
BlockOperator gen_operator(const SpaceSpec& spec, std::uint64_t seed,
                           double scale, Ensemble ensemble);

// Rank-one embedding checks: column rule of embed_l1(a) equals ||a||_1,
// first_column inverts embed_l1 exactly, projection never expands norms.
VerificationReport suite_embedding(const SuiteParams& params,
                                   std::vector<CaseRow>* rows = nullptr);

// Sign-flip averaging recursion: agreement masks, flip isometries and norm
// monotonicity at exact exponents, interval consequences for p in (1, inf),
// and the diagonal lower bound.
VerificationReport suite_tong(const SuiteParams& params,
                              std::vector<CaseRow>* rows = nullptr);

// Solver cross-checks: spectral oracle at p = 2 on scalar blocks, closed-form
// rules against brute-force enumeration, sampling bound ordering, homogeneity
// and flip invariance.
VerificationReport suite_solver(const SuiteParams& params,
                                std::vector<CaseRow>* rows = nullptr);

// Truncated composite l1^m -> D_m -> B(E_m): block norms, recovery, the
// natural l1 copy inside the sup-normed truncation, the diagonal interval,
// and xi(delta) = id.
VerificationReport suite_chain(const SuiteParams& params,
                               std::vector<CaseRow>* rows = nullptr);

// Largest singular value by power iteration on the Gram operator; used as an
// independent cross-check for p = 2 scalar-block estimates. Stays clear of
// the norms-module code paths on purpose.
double spectral_norm_power(const DenseMatrix& a, std::uint64_t seed);

// Full dense matrix of a block operator (codomain-major coordinates).
DenseMatrix flatten_dense(const BlockOperator& T);

}  // namespace oplab
