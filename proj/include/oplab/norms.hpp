#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oplab/operators.hpp"

namespace oplab {

enum class NormMethod { exact_l1, exact_linf, extreme_enum, sampling };
std::string to_string(NormMethod m);

// Certified interval for an operator norm. `witness` is a unit vector with
// vec_norm(apply(T, witness)) >= lower - 1e-9, re-checkable by the caller.
// Exact methods report upper == lower.
struct NormEstimate {
  double lower;
  double upper;
  BlockVector witness;
  NormMethod method;
};

struct SolverConfig {
  std::int32_t restarts = 32;
  std::int32_t max_iters = 10000;
  double tol = 1e-10;  // relative ascent stall threshold
  std::uint64_t seed = 0;
  bool grid_cert = false;
  std::int32_t grid_resolution = 64;
};

void validate(const SolverConfig& cfg);  // throws ConfigError

// Extreme-point parametrization of the domain ball: one coordinate per
// block (0-based).
struct Selection {
  std::vector<std::int32_t> coord;
};

struct ExactNorm {
  double value;
  BlockVector witness;
};

struct InnerMaxResult {
  double lower;
  std::vector<double> t;  // argmax weights, ||t||_p = 1
  double upper;
};

struct SamplingBound {
  double lower;
  BlockVector witness;
};

// Dispatches on the domain outer exponent (1 -> column rule, inf -> extreme
// enumeration, otherwise projected ascent over selections) and always folds
// every signed basis vector of the domain into `lower`. The basis-witness
// evaluation is a hard contract, not an optimization: the diagonal
// lower-bound checks depend on it.
NormEstimate opnorm(const BlockOperator& T, const SolverConfig& cfg);

// Column rule for an l1 domain: max over domain coordinates of the codomain
// norm of the corresponding column. Ties break at the lowest (block, coord).
ExactNorm opnorm_l1_exact(const BlockOperator& T);

// Exact value for an l-infinity domain by enumerating the extreme points of
// the domain ball (blockwise signed basis vectors); exact because the ball
// is a product of block balls and x -> ||Tx|| is convex.
ExactNorm opnorm_linf_exact(const BlockOperator& T);

// Certified interval for finite domain exponents p in (1, inf).
NormEstimate extreme_enumeration(const BlockOperator& T,
                                 const SolverConfig& cfg);

// max { ||sum_k t_k col_k||_codomain : ||t||_p <= 1 } approximated by
// projected ascent on the lp sphere, with a Hoelder column bound as `upper`.
InnerMaxResult inner_max_lp(const SpaceSpec& codomain,
                            const std::vector<BlockVector>& columns,
                            const Exponent& p, const SolverConfig& cfg);

// Best value over `samples` random unit vectors (per-block Laplace draws
// normalized to the sphere) plus all signed basis vectors; a certified lower
// bound by construction.
SamplingBound sampling_oracle(const BlockOperator& T, std::int64_t samples,
                              std::uint64_t seed);

namespace serial {

// Plain single-thread reference drivers. They run the same per-index kernels
// as the OpenMP drivers above through straightforward loops, so the two must
// agree bit-for-bit; tests and the benchmark tool compare them.
NormEstimate opnorm(const BlockOperator& T, const SolverConfig& cfg);
ExactNorm opnorm_linf_exact(const BlockOperator& T);
NormEstimate extreme_enumeration(const BlockOperator& T,
                                 const SolverConfig& cfg);
SamplingBound sampling_oracle(const BlockOperator& T, std::int64_t samples,
                              std::uint64_t seed);

}  // namespace serial

}  // namespace oplab
