#include "oplab/operators.hpp"

#include <string>
#include <utility>

namespace oplab {

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ShapeError("matrix needs at least one row");
  DenseMatrix m(static_cast<std::int32_t>(rows.size()),
                static_cast<std::int32_t>(rows[0].size()));
  for (std::int32_t r = 0; r < m.rows(); ++r) {
    if (static_cast<std::int32_t>(rows[r].size()) != m.cols())
      throw ShapeError("row " + std::to_string(r + 1) + " has " +
                       std::to_string(rows[r].size()) + " entries, expected " +
                       std::to_string(m.cols()));
    for (std::int32_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

BlockOperator::BlockOperator(SpaceSpec domain, SpaceSpec codomain)
    : domain_(std::move(domain)), codomain_(std::move(codomain)) {
  grid_.reserve(static_cast<std::size_t>(codomain_.block_count()) *
                domain_.block_count());
  for (std::int32_t i = 0; i < codomain_.block_count(); ++i)
    for (std::int32_t j = 0; j < domain_.block_count(); ++j)
      grid_.emplace_back(codomain_.dim(i), domain_.dim(j));
}

BlockOperator BlockOperator::identity(const SpaceSpec& spec) {
  BlockOperator t(spec, spec);
  for (std::int32_t i = 0; i < spec.block_count(); ++i)
    for (std::int32_t c = 0; c < spec.dim(i); ++c) t.entry(i, i)(c, c) = 1.0;
  return t;
}

BlockVector apply(const BlockOperator& T, const BlockVector& x) {
  if (x.spec() != T.domain())
    throw ShapeError("apply: vector spec does not match operator domain");
  BlockVector y(T.codomain());
  const std::int32_t mc = T.codomain().block_count();
  const std::int32_t md = T.domain().block_count();
  for (std::int32_t i = 0; i < mc; ++i) {
    std::vector<double>& yi = y.block(i);
    for (std::int32_t j = 0; j < md; ++j) {
      const DenseMatrix& M = T.entry(i, j);
      const std::vector<double>& xj = x.block(j);
      for (std::int32_t r = 0; r < M.rows(); ++r) {
        double s = yi[r];
        for (std::int32_t c = 0; c < M.cols(); ++c) s += M(r, c) * xj[c];
        yi[r] = s;
      }
    }
  }
  return y;
}

BlockOperator op_lincomb(double a, const BlockOperator& A, double b,
                         const BlockOperator& B) {
  if (A.domain() != B.domain() || A.codomain() != B.codomain())
    throw ShapeError("op_lincomb: operands have mismatched specs");
  BlockOperator C(A.domain(), A.codomain());
  for (std::int32_t i = 0; i < A.codomain().block_count(); ++i)
    for (std::int32_t j = 0; j < A.domain().block_count(); ++j) {
      const DenseMatrix& ma = A.entry(i, j);
      const DenseMatrix& mb = B.entry(i, j);
      DenseMatrix& mc = C.entry(i, j);
      for (std::size_t k = 0; k < mc.data().size(); ++k)
        mc.data()[k] = a * ma.data()[k] + b * mb.data()[k];
    }
  return C;
}

BlockOperator embed_l1(const BlockVector& a) {
  if (a.spec().block_count() != 1)
    throw ShapeError("embed_l1: input must live in a single-block space");
  BlockOperator T(a.spec(), a.spec());
  DenseMatrix& m = T.entry(0, 0);
  for (std::int32_t r = 0; r < m.rows(); ++r) m(r, 0) = a.block(0)[r];
  return T;
}

BlockVector first_column(const BlockOperator& T) {
  if (T.domain().block_count() != 1 || T.codomain().block_count() != 1)
    throw ShapeError("first_column: operator must be single-block");
  const DenseMatrix& m = T.entry(0, 0);
  if (m.rows() != m.cols())
    throw ShapeError("first_column: operator must be square");
  BlockVector a(T.domain());
  for (std::int32_t r = 0; r < m.rows(); ++r) a.block(0)[r] = m(r, 0);
  return a;
}

BlockOperator delta(const std::vector<BlockOperator>& components,
                    const Exponent& outer) {
  if (components.empty())
    throw ShapeError("delta: needs at least one component");
  std::vector<std::int32_t> dims;
  dims.reserve(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) {
    const BlockOperator& c = components[i];
    if (c.domain().block_count() != 1 || c.codomain().block_count() != 1 ||
        c.domain().dim(0) != c.codomain().dim(0))
      throw ShapeError("delta: component " + std::to_string(i + 1) +
                       " is not a square single-block operator");
    dims.push_back(c.domain().dim(0));
  }
  SpaceSpec spec(outer, dims);
  BlockOperator T(spec, spec);
  for (std::size_t i = 0; i < components.size(); ++i)
    T.entry(static_cast<std::int32_t>(i), static_cast<std::int32_t>(i)) =
        components[i].entry(0, 0);
  return T;
}

std::vector<BlockOperator> xi(const BlockOperator& T) {
  if (!T.is_square())
    throw ShapeError("xi: operator domain and codomain differ");
  std::vector<BlockOperator> parts;
  parts.reserve(T.domain().block_count());
  for (std::int32_t i = 0; i < T.domain().block_count(); ++i) {
    SpaceSpec l1n(Exponent::finite(1.0), {T.domain().dim(i)});
    BlockOperator c(l1n, l1n);
    c.entry(0, 0) = T.entry(i, i);
    parts.push_back(std::move(c));
  }
  return parts;
}

namespace {

void check_block_index(const SpaceSpec& spec, std::int32_t idx,
                       const char* what) {
  if (idx < 0 || idx >= spec.block_count())
    throw RangeError(std::string(what) + ": block index " +
                     std::to_string(idx + 1) + " out of range [1, " +
                     std::to_string(spec.block_count()) + "]");
}

void negate(DenseMatrix& m) {
  for (double& v : m.data()) v = -v;
}

}  // namespace

BlockOperator flip_block_column(const BlockOperator& T, std::int32_t j) {
  check_block_index(T.domain(), j, "flip_block_column");
  BlockOperator F = T;
  for (std::int32_t i = 0; i < T.codomain().block_count(); ++i) {
    negate(F.entry(i, j));
#ifdef OPLAB_FAULT_FLIP_COLUMN
    // fault-injection build: leave one coefficient un-negated so verification
    // suites have a genuine defect to catch
    if (i == 0) F.entry(i, j)(0, 0) = T.entry(i, j)(0, 0);
#endif
  }
  return F;
}

BlockOperator flip_block_row(const BlockOperator& T, std::int32_t i) {
  check_block_index(T.codomain(), i, "flip_block_row");
  BlockOperator F = T;
  for (std::int32_t j = 0; j < T.domain().block_count(); ++j)
    negate(F.entry(i, j));
  return F;
}

BlockOperator tong_step(const BlockOperator& T, std::int32_t idx) {
  if (!T.is_square())
    throw ShapeError("tong_step: operator domain and codomain differ");
  check_block_index(T.domain(), idx, "tong_step");
  return op_lincomb(0.5, flip_block_column(T, idx), 0.5,
                    flip_block_row(T, idx));
}

TongTrace tong_sequence(const BlockOperator& T) {
  if (!T.is_square())
    throw ShapeError("tong_sequence: operator domain and codomain differ");
  TongTrace trace{T, {}};
  trace.steps.reserve(T.domain().block_count());
  BlockOperator S = T;
  for (std::int32_t n = 0; n < T.domain().block_count(); ++n) {
    S = tong_step(S, n);
    trace.steps.push_back(S);
  }
  return trace;
}

}  // namespace oplab
