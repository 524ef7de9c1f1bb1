#include <cmath>

#include "doctest.h"
#include "oplab/norms.hpp"
#include "oplab/operators.hpp"
#include "oplab/rng.hpp"
#include "oplab/verify.hpp"

using namespace oplab;

namespace {

// square operator on scalar blocks from a plain matrix
BlockOperator scalar_op(const Exponent& p,
                        const std::vector<std::vector<double>>& rows) {
  const std::int32_t n = static_cast<std::int32_t>(rows.size());
  SpaceSpec spec(p, std::vector<std::int32_t>(n, 1));
  BlockOperator T(spec, spec);
  for (std::int32_t i = 0; i < n; ++i)
    for (std::int32_t j = 0; j < n; ++j) T.entry(i, j)(0, 0) = rows[i][j];
  return T;
}

BlockVector scalar_vec(const SpaceSpec& spec, const std::vector<double>& v) {
  BlockVector x(spec);
  for (std::size_t i = 0; i < v.size(); ++i)
    x.block(static_cast<std::int32_t>(i))[0] = v[i];
  return x;
}

SpaceSpec random_square_spec(Rng& rng, const Exponent& p, int m_max = 4,
                             int n_max = 3) {
  const std::int32_t m = 1 + static_cast<std::int32_t>(rng.next_u64() % m_max);
  std::vector<std::int32_t> dims(m);
  for (auto& d : dims) d = 1 + static_cast<std::int32_t>(rng.next_u64() % n_max);
  return SpaceSpec(p, dims);
}

const Exponent kPs[] = {Exponent::finite(1.0), Exponent::finite(1.5),
                        Exponent::finite(2.0), Exponent::inf()};

}  // namespace

TEST_CASE("apply examples") {
  Rng rng(3);
  SpaceSpec s(Exponent::finite(2.0), {2, 3});
  const BlockOperator id = BlockOperator::identity(s);
  BlockVector x(s, {{1.0, -2.0}, {0.5, 0.0, 3.0}});
  CHECK(apply(id, x) == x);

  const BlockOperator T =
      scalar_op(Exponent::finite(2.0), {{1.0, 2.0}, {3.0, 4.0}});
  const BlockVector y = apply(T, scalar_vec(T.domain(), {1.0, 1.0}));
  CHECK(y.block(0)[0] == 3.0);
  CHECK(y.block(1)[0] == 7.0);

  const BlockOperator zero(s, s);
  CHECK(vec_norm(apply(zero, x)) == 0.0);

  SpaceSpec other(Exponent::finite(2.0), {3, 2});
  CHECK_THROWS_AS(apply(T, BlockVector(other)), ShapeError);
}

TEST_CASE("op_lincomb examples") {
  const BlockOperator A =
      scalar_op(Exponent::finite(2.0), {{1.0, 2.0}, {3.0, 4.0}});
  CHECK(op_lincomb(0.5, A, 0.5, A) == A);
  const BlockOperator Z = op_lincomb(1.0, A, -1.0, A);
  CHECK(Z == BlockOperator(A.domain(), A.codomain()));
  SpaceSpec other(Exponent::finite(2.0), {3});
  CHECK_THROWS_AS(op_lincomb(1.0, A, 1.0, BlockOperator(other, other)),
                  ShapeError);
}

TEST_CASE("embed_l1 and first_column") {
  SpaceSpec l13(Exponent::finite(1.0), {3});
  const BlockVector a(l13, {{1.0, -2.0, 3.0}});
  const BlockOperator E = embed_l1(a);
  const DenseMatrix& M = E.entry(0, 0);
  CHECK(M == DenseMatrix::from_rows({{1, 0, 0}, {-2, 0, 0}, {3, 0, 0}}));
  CHECK(opnorm_l1_exact(E).value == 6.0);
  CHECK(first_column(E) == a);

  SpaceSpec l12(Exponent::finite(1.0), {2});
  const BlockOperator E1 = embed_l1(basis_vector(l12, 0, 0, +1));
  CHECK(E1.entry(0, 0) == DenseMatrix::from_rows({{1, 0}, {0, 0}}));

  CHECK(first_column(BlockOperator::identity(l13)) ==
        basis_vector(l13, 0, 0, +1));
  CHECK(first_column(BlockOperator(l13, l13)) == BlockVector(l13));

  SpaceSpec multi(Exponent::finite(1.0), {1, 2});
  CHECK_THROWS_AS(embed_l1(BlockVector(multi)), ShapeError);
  CHECK_THROWS_AS(first_column(BlockOperator(multi, multi)), ShapeError);
  SpaceSpec l1_rect_d(Exponent::finite(1.0), {2});
  CHECK_THROWS_AS(first_column(BlockOperator(l1_rect_d, l13)), ShapeError);

  Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    const std::int32_t n = 1 + static_cast<std::int32_t>(rng.next_u64() % 8);
    SpaceSpec l1n(Exponent::finite(1.0), {n});
    BlockVector v(l1n);
    for (auto& c : v.block(0)) c = rng.uniform(-2.0, 2.0);
    CHECK(first_column(embed_l1(v)) == v);
  }
}

TEST_CASE("delta and xi") {
  SpaceSpec l11(Exponent::finite(1.0), {1});
  SpaceSpec l12(Exponent::finite(1.0), {2});
  BlockOperator T1(l11, l11);
  T1.entry(0, 0)(0, 0) = 2.0;
  BlockOperator T2(l12, l12);
  T2.entry(0, 0)(0, 1) = 5.0;
  const std::vector<BlockOperator> parts = {T1, T2};

  const BlockOperator D = delta(parts, Exponent::finite(2.0));
  CHECK(D.domain() == SpaceSpec(Exponent::finite(2.0), {1, 2}));
  CHECK(xi(D) == parts);
  CHECK(delta(xi(D), Exponent::finite(2.0)) == D);

  // identity components assemble the identity on the sum space
  SpaceSpec s(Exponent::finite(1.5), {2, 3, 1});
  std::vector<BlockOperator> ids;
  for (std::int32_t d : s.dims()) {
    SpaceSpec l1n(Exponent::finite(1.0), {d});
    ids.push_back(BlockOperator::identity(l1n));
  }
  CHECK(delta(ids, Exponent::finite(1.5)) == BlockOperator::identity(s));

  // all-ones operator on scalar blocks has all-ones diagonal parts
  const BlockOperator ones =
      scalar_op(Exponent::finite(2.0), {{1.0, 1.0}, {1.0, 1.0}});
  const auto parts_ones = xi(ones);
  CHECK(parts_ones.size() == 2);
  CHECK(parts_ones[0].entry(0, 0)(0, 0) == 1.0);
  CHECK(parts_ones[1].entry(0, 0)(0, 0) == 1.0);

  const auto zero_parts = xi(BlockOperator(s, s));
  for (const auto& z : zero_parts)
    for (double v : z.entry(0, 0).data()) CHECK(v == 0.0);

  BlockOperator rect(SpaceSpec(Exponent::finite(2.0), {2}),
                     SpaceSpec(Exponent::finite(2.0), {3}));
  CHECK_THROWS_AS(xi(rect), ShapeError);
  BlockOperator nonsquare_comp(l12, l12);
  CHECK_THROWS_AS(delta({rect}, Exponent::finite(2.0)), ShapeError);
}

TEST_CASE("flips") {
  const BlockOperator T =
      scalar_op(Exponent::finite(2.0), {{1.0, 2.0}, {3.0, 4.0}});
  const BlockOperator Fc = flip_block_column(T, 0);
  CHECK(Fc.entry(0, 0)(0, 0) == -1.0);
  CHECK(Fc.entry(1, 0)(0, 0) == -3.0);
  CHECK(Fc.entry(0, 1)(0, 0) == 2.0);
  CHECK(Fc.entry(1, 1)(0, 0) == 4.0);
  CHECK(flip_block_column(Fc, 0) == T);

  const BlockOperator Fr = flip_block_row(T, 0);
  CHECK(Fr.entry(0, 0)(0, 0) == -1.0);
  CHECK(Fr.entry(0, 1)(0, 0) == -2.0);
  CHECK(Fr.entry(1, 0)(0, 0) == 3.0);
  CHECK(flip_block_row(Fr, 0) == T);

  CHECK_THROWS_AS(flip_block_column(T, 2), RangeError);
  CHECK_THROWS_AS(flip_block_row(T, -1), RangeError);

  // exact exponents: flips are isometries, bit for bit here
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    for (const Exponent& p : {Exponent::finite(1.0), Exponent::inf()}) {
      const SpaceSpec s = random_square_spec(rng, p);
      const BlockOperator R = gen_operator(s, rng.next_u64(), 1.0);
      const std::int32_t j =
          static_cast<std::int32_t>(rng.next_u64() % s.block_count());
      const auto rule = p.is_one() ? &opnorm_l1_exact : &opnorm_linf_exact;
      CHECK(std::abs(rule(flip_block_column(R, j)).value - rule(R).value) <=
            1e-12);
      CHECK(std::abs(rule(flip_block_row(R, j)).value - rule(R).value) <=
            1e-12);
    }
  }
}

TEST_CASE("flip value-set invariance holds pointwise without any solver") {
  Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    const Exponent p = kPs[rng.next_u64() % 4];
    const SpaceSpec s = random_square_spec(rng, p);
    const BlockOperator T = gen_operator(s, rng.next_u64(), 1.0);
    BlockVector x(s);
    for (std::int32_t b = 0; b < s.block_count(); ++b)
      for (auto& c : x.block(b)) c = rng.uniform(-1.0, 1.0);
    const std::int32_t j =
        static_cast<std::int32_t>(rng.next_u64() % s.block_count());
    BlockVector xj = x;
    for (auto& c : xj.block(j)) c = -c;
    CHECK(vec_norm(apply(flip_block_column(T, j), x)) ==
          vec_norm(apply(T, xj)));
  }
}

TEST_CASE("tong_step examples") {
  const BlockOperator T =
      scalar_op(Exponent::finite(2.0), {{1.0, 2.0}, {3.0, 4.0}});
  const BlockOperator S1 = tong_step(T, 0);
  CHECK(S1 == scalar_op(Exponent::finite(2.0), {{-1.0, 0.0}, {0.0, 4.0}}));
  const BlockOperator S2 = tong_step(S1, 1);
  CHECK(S2 == scalar_op(Exponent::finite(2.0), {{-1.0, 0.0}, {0.0, -4.0}}));

  // applying a step to a block-diagonal operator negates one diagonal block
  SpaceSpec s(Exponent::finite(2.0), {2, 2});
  BlockOperator D(s, s);
  D.entry(0, 0) = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  D.entry(1, 1) = DenseMatrix::from_rows({{5, 6}, {7, 8}});
  const BlockOperator DS = tong_step(D, 1);
  CHECK(DS.entry(0, 0) == D.entry(0, 0));
  CHECK(DS.entry(1, 1) == DenseMatrix::from_rows({{-5, -6}, {-7, -8}}));

  CHECK_THROWS_AS(tong_step(T, 5), RangeError);
}

TEST_CASE("tong_sequence agreement structure") {
  const BlockOperator T =
      scalar_op(Exponent::finite(2.0), {{1.0, 2.0}, {3.0, 4.0}});
  const TongTrace trace = tong_sequence(T);
  REQUIRE(trace.steps.size() == 2);
  CHECK(trace.steps[0] ==
        scalar_op(Exponent::finite(2.0), {{-1.0, 0.0}, {0.0, 4.0}}));
  CHECK(trace.steps[1] ==
        scalar_op(Exponent::finite(2.0), {{-1.0, 0.0}, {0.0, -4.0}}));

  Rng rng(31);
  for (int tc = 0; tc < 150; ++tc) {
    const SpaceSpec s = random_square_spec(rng, kPs[rng.next_u64() % 4]);
    const BlockOperator R = gen_operator(s, rng.next_u64(), 1.0);
    const TongTrace tr = tong_sequence(R);
    const std::int32_t m = s.block_count();
    REQUIRE(static_cast<std::int32_t>(tr.steps.size()) == m);
    for (std::int32_t n = 0; n < m; ++n) {
      const BlockOperator& S = tr.steps[n];
      CHECK(S.domain() == R.domain());
      for (std::int32_t i = 0; i < m; ++i)
        for (std::int32_t j = 0; j < m; ++j) {
          const DenseMatrix& e = S.entry(i, j);
          if (i > n && j > n) {
            CHECK(e == R.entry(i, j));
          } else if (i == j) {
            for (std::size_t k = 0; k < e.data().size(); ++k)
              CHECK(std::abs(e.data()[k] + R.entry(i, j).data()[k]) <= 1e-15);
          } else {
            for (double v : e.data()) CHECK(v == 0.0);
          }
        }
    }
    // telescoped endpoint: -delta(xi(R)) entry for entry
    const BlockOperator D = delta(xi(R), s.outer());
    CHECK(tr.steps[m - 1] == op_lincomb(-1.0, D, 0.0, D));
  }

  // m = 1 degenerate: single step, the negated block
  SpaceSpec one(Exponent::finite(2.0), {3});
  const BlockOperator R1 = gen_operator(one, 99, 1.0);
  const TongTrace t1 = tong_sequence(R1);
  REQUIRE(t1.steps.size() == 1);
  CHECK(t1.steps[0] == op_lincomb(-1.0, R1, 0.0, R1));

  // already diagonal: step n negates the first n diagonal blocks
  SpaceSpec s2(Exponent::finite(1.0), {1, 1, 1});
  BlockOperator diag(s2, s2);
  diag.entry(0, 0)(0, 0) = 1.0;
  diag.entry(1, 1)(0, 0) = 2.0;
  diag.entry(2, 2)(0, 0) = 3.0;
  const TongTrace td = tong_sequence(diag);
  CHECK(td.steps[1].entry(0, 0)(0, 0) == -1.0);
  CHECK(td.steps[1].entry(1, 1)(0, 0) == -2.0);
  CHECK(td.steps[1].entry(2, 2)(0, 0) == 3.0);
  CHECK(td.steps[2] == op_lincomb(-1.0, diag, 0.0, diag));
}

TEST_CASE("averaging never beats the pointwise mean") {
  Rng rng(37);
  for (int i = 0; i < 200; ++i) {
    const Exponent p = kPs[rng.next_u64() % 4];
    const SpaceSpec s = random_square_spec(rng, p);
    const BlockOperator A = gen_operator(s, rng.next_u64(), 1.0);
    const BlockOperator B = gen_operator(s, rng.next_u64(), 1.0);
    const BlockOperator M = op_lincomb(0.5, A, 0.5, B);
    BlockVector x(s);
    for (std::int32_t b = 0; b < s.block_count(); ++b)
      for (auto& c : x.block(b)) c = rng.uniform(-1.0, 1.0);
    const double nx = vec_norm(x);
    if (nx > 0.0) x = vec_lincomb(1.0 / nx, x, 0.0, x);
    CHECK(vec_norm(apply(M, x)) <=
          0.5 * (vec_norm(apply(A, x)) + vec_norm(apply(B, x))) + 1e-12);
  }
}

TEST_CASE("single-block images dominate the diagonal part") {
  Rng rng(61);
  for (int i = 0; i < 200; ++i) {
    const Exponent p = kPs[rng.next_u64() % 4];
    const SpaceSpec s = random_square_spec(rng, p);
    const BlockOperator T = gen_operator(s, rng.next_u64(), 1.0);
    const std::int32_t b =
        static_cast<std::int32_t>(rng.next_u64() % s.block_count());
    BlockVector x(s);
    for (auto& c : x.block(b)) c = rng.uniform(-1.0, 1.0);
    const BlockVector y = apply(T, x);
    double bi = 0.0;
    for (double v : y.block(b)) bi += std::abs(v);
    CHECK(vec_norm(y) >= bi);
  }
}
