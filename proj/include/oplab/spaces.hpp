#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "oplab/errors.hpp"

namespace oplab {

// Norm exponent p in [1, inf]. Infinity is a distinct symbol, never a
// sentinel float; finite values are parsed from decimal strings so CLI
// round-trips do not pick up binary-fraction surprises.
class Exponent {
 public:
  static Exponent finite(double p);
  static Exponent inf();
  static Exponent parse(std::string_view text);  // "<decimal>" or "inf"

  bool is_inf() const { return inf_; }
  bool is_one() const { return !inf_ && value_ == 1.0; }
  double value() const;  // finite exponents only

  // 1 <-> inf, finite p > 1 -> p/(p-1)
  Exponent dual() const;

  std::string str() const;  // round-trips through parse()

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent(double v, bool inf) : value_(v), inf_(inf) {}
  double value_;
  bool inf_;
};

inline Exponent dual_exponent(const Exponent& p) { return p.dual(); }

// A finite mixed-norm sequence space: the outer-exponent sum of m blocks,
// block i carrying the l1 norm on dims[i] coordinates.
class SpaceSpec {
 public:
  SpaceSpec(Exponent outer, std::vector<std::int32_t> block_dims);

  const Exponent& outer() const { return outer_; }
  std::int32_t block_count() const {
    return static_cast<std::int32_t>(dims_.size());
  }
  std::int32_t dim(std::int32_t block) const { return dims_[block]; }
  const std::vector<std::int32_t>& dims() const { return dims_; }
  std::int64_t total_dim() const { return total_; }

  // "p=<decimal|inf>;blocks=<n1>,<n2>,..." (shared by the CLI and JSON)
  std::string str() const;
  static SpaceSpec parse(std::string_view text);

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;

 private:
  Exponent outer_;
  std::vector<std::int32_t> dims_;
  std::int64_t total_;
};

// One element of a SpaceSpec's space, stored per block. Immutable use is
// assumed after construction; all operations below are pure.
class BlockVector {
 public:
  explicit BlockVector(SpaceSpec spec);  // zero vector
  BlockVector(SpaceSpec spec, std::vector<std::vector<double>> blocks);

  const SpaceSpec& spec() const { return spec_; }
  const std::vector<std::vector<double>>& blocks() const { return blocks_; }
  std::vector<double>& block(std::int32_t i) { return blocks_[i]; }
  const std::vector<double>& block(std::int32_t i) const { return blocks_[i]; }

  friend bool operator==(const BlockVector&, const BlockVector&) = default;

 private:
  SpaceSpec spec_;
  std::vector<std::vector<double>> blocks_;
};

// Mixed norm: (sum_i ||x_i||_1^p)^(1/p), max_i ||x_i||_1 for p = inf.
// Throws InvalidInputError on non-finite coordinates.
double vec_norm(const BlockVector& x);

// Signed canonical basis vector; indices are 0-based here, 1-based in all
// external formats. sign must be +1 or -1.
BlockVector basis_vector(const SpaceSpec& spec, std::int32_t block,
                         std::int32_t coord, int sign);

// a*x + b*y, componentwise; x and y must share a spec.
BlockVector vec_lincomb(double a, const BlockVector& x, double b,
                        const BlockVector& y);

}  // namespace oplab
