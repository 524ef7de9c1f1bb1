#pragma once

#include <cstdint>
#include <vector>

#include "oplab/spaces.hpp"

namespace oplab {

// Dense row-major matrix. Zero entries are stored explicitly; at desk scale
// sparsity machinery is not worth its complexity.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::int32_t rows, std::int32_t cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * cols, 0.0) {}
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::int32_t rows() const { return rows_; }
  std::int32_t cols() const { return cols_; }
  double& operator()(std::int32_t r, std::int32_t c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double operator()(std::int32_t r, std::int32_t c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::int32_t rows_ = 0;
  std::int32_t cols_ = 0;
  std::vector<double> data_;
};

// Operator between mixed-norm spaces, held as the complete grid of dense
// blocks: entry (i, j) maps domain block j into codomain block i.
class BlockOperator {
 public:
  BlockOperator(SpaceSpec domain, SpaceSpec codomain);  // zero operator
  static BlockOperator identity(const SpaceSpec& spec);

  const SpaceSpec& domain() const { return domain_; }
  const SpaceSpec& codomain() const { return codomain_; }
  DenseMatrix& entry(std::int32_t i, std::int32_t j) {
    return grid_[static_cast<std::size_t>(i) * domain_.block_count() + j];
  }
  const DenseMatrix& entry(std::int32_t i, std::int32_t j) const {
    return grid_[static_cast<std::size_t>(i) * domain_.block_count() + j];
  }
  bool is_square() const { return domain_ == codomain_; }

  friend bool operator==(const BlockOperator&, const BlockOperator&) = default;

 private:
  SpaceSpec domain_;
  SpaceSpec codomain_;
  std::vector<DenseMatrix> grid_;  // row-major over (codomain, domain) blocks
};

// The sign-flip averaging recursion applied at block 1..n; steps[n-1] keeps
// the same domain/codomain as the source operator.
struct TongTrace {
  BlockOperator source;
  std::vector<BlockOperator> steps;
};

// y_i = sum_j T_ij x_j
BlockVector apply(const BlockOperator& T, const BlockVector& x);

// entrywise a*A + b*B over matching grids
BlockOperator op_lincomb(double a, const BlockOperator& A, double b,
                         const BlockOperator& B);

// Rank-one realization of a single-block l1 vector inside the operators on
// its own space: the matrix whose first column is `a`, all else zero.
BlockOperator embed_l1(const BlockVector& a);

// T e_1, the left inverse of embed_l1: first_column(embed_l1(a)) == a.
BlockVector first_column(const BlockOperator& T);

// Block-diagonal operator on the outer-exponent sum of the components'
// spaces. Components must be square single-block operators.
BlockOperator delta(const std::vector<BlockOperator>& components,
                    const Exponent& outer);

// Diagonal grid entries of a square operator, as canonical single-block l1
// operators; xi(delta(Ts, p)) == Ts for canonical components.
std::vector<BlockOperator> xi(const BlockOperator& T);

// Negate grid column j (all entries (i, j)); an isometry at exact exponents
// because block sign changes act isometrically on the domain.
BlockOperator flip_block_column(const BlockOperator& T, std::int32_t j);

// Negate grid row i (all entries (i, j)).
BlockOperator flip_block_row(const BlockOperator& T, std::int32_t i);

// (flip_block_column(T, idx) + flip_block_row(T, idx)) / 2. Computed through
// the two flips and op_lincomb rather than by writing the known output
// pattern, so the agreement property stays a genuine test.
BlockOperator tong_step(const BlockOperator& T, std::int32_t idx);

// Cumulative tong_step at blocks 1..m. steps[n-1] agrees with
// diag(-T_11,...,-T_nn, 0,...) wherever i <= n or j <= n and with T
// elsewhere; steps[m-1] == -delta(xi(T)).
TongTrace tong_sequence(const BlockOperator& T);

}  // namespace oplab
