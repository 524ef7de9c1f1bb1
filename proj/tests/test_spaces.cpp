#include <cmath>

#include "doctest.h"
#include "oplab/rng.hpp"
#include "oplab/spaces.hpp"

using namespace oplab;

namespace {

BlockVector random_vector(const SpaceSpec& spec, Rng& rng, double scale) {
  BlockVector x(spec);
  for (std::int32_t i = 0; i < spec.block_count(); ++i)
    for (std::int32_t c = 0; c < spec.dim(i); ++c)
      x.block(i)[c] = rng.uniform(-scale, scale);
  return x;
}

SpaceSpec random_spec(Rng& rng, const Exponent& p) {
  const std::int32_t m = 1 + static_cast<std::int32_t>(rng.next_u64() % 4);
  std::vector<std::int32_t> dims(m);
  for (auto& d : dims) d = 1 + static_cast<std::int32_t>(rng.next_u64() % 5);
  return SpaceSpec(p, dims);
}

const Exponent kPs[] = {Exponent::finite(1.0), Exponent::finite(1.5),
                        Exponent::finite(2.0), Exponent::finite(3.0),
                        Exponent::inf()};

}  // namespace

TEST_CASE("exponent duality") {
  CHECK(Exponent::finite(2.0).dual() == Exponent::finite(2.0));
  CHECK(Exponent::finite(1.0).dual() == Exponent::inf());
  CHECK(Exponent::inf().dual() == Exponent::finite(1.0));
  CHECK(Exponent::finite(3.0).dual().value() == doctest::Approx(1.5).epsilon(1e-15));

  // involution within 1e-12 relative
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const double p = 1.0 + 9.0 * rng.uniform01();
    const Exponent e = Exponent::finite(p);
    CHECK(std::abs(e.dual().dual().value() - p) <= 1e-12 * p);
  }
  CHECK(Exponent::inf().dual().dual() == Exponent::inf());
  CHECK(Exponent::finite(1.0).dual().dual() == Exponent::finite(1.0));
}

TEST_CASE("exponent parse and round-trip") {
  CHECK(Exponent::parse("inf") == Exponent::inf());
  CHECK(Exponent::parse("INF") == Exponent::inf());
  CHECK(Exponent::parse("2") == Exponent::finite(2.0));
  CHECK(Exponent::parse("1.5") == Exponent::finite(1.5));
  CHECK_THROWS_AS(Exponent::parse("0.5"), ParseError);
  CHECK_THROWS_AS(Exponent::parse("abc"), ParseError);
  CHECK_THROWS_AS(Exponent::parse(""), ParseError);
  CHECK_THROWS_AS(Exponent::finite(0.5), InvalidInputError);

  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double p = 1.0 + 20.0 * rng.uniform01();
    const Exponent e = Exponent::finite(p);
    CHECK(Exponent::parse(e.str()) == e);
  }
}

TEST_CASE("space string grammar") {
  const SpaceSpec a = SpaceSpec::parse("p=inf;blocks=1,2,3");
  CHECK(a.outer().is_inf());
  CHECK(a.dims() == std::vector<std::int32_t>{1, 2, 3});
  CHECK(a.total_dim() == 6);

  const SpaceSpec b = SpaceSpec::parse("p=1.5;blocks=4");
  CHECK(b.outer() == Exponent::finite(1.5));
  CHECK(b.dims() == std::vector<std::int32_t>{4});

  CHECK_THROWS_WITH_AS(SpaceSpec::parse("p=0.5;blocks=1"),
                       doctest::Contains("p must be >= 1"), ParseError);
  CHECK_THROWS_AS(SpaceSpec::parse("blocks=1"), ParseError);
  CHECK_THROWS_AS(SpaceSpec::parse("p=2;blocks="), ParseError);
  CHECK_THROWS_AS(SpaceSpec::parse("p=2;blocks=1,x"), ParseError);
  CHECK_THROWS_AS(SpaceSpec::parse("p=2;blocks=0"), ParseError);

  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const SpaceSpec s = random_spec(rng, kPs[rng.next_u64() % 5]);
    CHECK(SpaceSpec::parse(s.str()) == s);
  }
}

TEST_CASE("vec_norm examples") {
  SpaceSpec s2(Exponent::finite(2.0), {2, 1});
  const BlockVector x(s2, {{3.0, -1.0}, {2.0}});
  CHECK(vec_norm(x) == doctest::Approx(std::sqrt(20.0)).epsilon(1e-14));

  CHECK(vec_norm(BlockVector(s2)) == 0.0);

  SpaceSpec si(Exponent::inf(), {2, 2});
  const BlockVector y(si, {{1.0, 1.0}, {0.0, 3.0}});
  CHECK(vec_norm(y) == 3.0);

  BlockVector bad(s2);
  bad.block(0)[1] = std::nan("");
  CHECK_THROWS_AS(vec_norm(bad), InvalidInputError);
}

TEST_CASE("basis_vector examples") {
  SpaceSpec s(Exponent::finite(2.0), {1, 2});
  const BlockVector e = basis_vector(s, 1, 0, +1);
  CHECK(e.block(0)[0] == 0.0);
  CHECK(e.block(1)[0] == 1.0);
  CHECK(e.block(1)[1] == 0.0);
  CHECK(vec_norm(e) == 1.0);

  SpaceSpec s3(Exponent::finite(1.0), {3});
  const BlockVector f = basis_vector(s3, 0, 2, -1);
  CHECK(f.block(0)[2] == -1.0);
  CHECK(vec_norm(f) == 1.0);

  SpaceSpec s1(Exponent::finite(1.0), {1});
  CHECK_THROWS_AS(basis_vector(s1, 1, 0, +1), RangeError);
  CHECK_THROWS_AS(basis_vector(s3, 0, 3, +1), RangeError);
  CHECK_THROWS_AS(basis_vector(s3, 0, 0, 2), InvalidInputError);
}

TEST_CASE("vec_lincomb") {
  Rng rng(19);
  SpaceSpec s(Exponent::finite(2.0), {2, 3});
  const BlockVector x = random_vector(s, rng, 1.0);
  const BlockVector y = random_vector(s, rng, 1.0);
  CHECK(vec_lincomb(1.0, x, 0.0, y) == x);
  CHECK(vec_lincomb(0.5, x, 0.5, x) == x);
  SpaceSpec other(Exponent::finite(2.0), {3, 2});
  CHECK_THROWS_AS(vec_lincomb(1.0, x, 1.0, BlockVector(other)), ShapeError);
}

TEST_CASE("norm axioms on random vectors") {
  Rng rng(41);
  for (int i = 0; i < 400; ++i) {
    const Exponent p = kPs[rng.next_u64() % 5];
    const SpaceSpec s = random_spec(rng, p);
    const BlockVector x = random_vector(s, rng, 2.0);
    const BlockVector y = random_vector(s, rng, 2.0);
    const double nx = vec_norm(x);
    const double ny = vec_norm(y);

    const double c = rng.uniform(-3.0, 3.0);
    const BlockVector cx = vec_lincomb(c, x, 0.0, x);
    CHECK(std::abs(vec_norm(cx) - std::abs(c) * nx) <=
          1e-12 * std::max(1.0, std::abs(c) * nx));

    CHECK(vec_norm(vec_lincomb(1.0, x, 1.0, y)) <= nx + ny + 1e-12);

    CHECK(vec_norm(BlockVector(s)) == 0.0);
    if (nx == 0.0) {
      for (const auto& b : x.blocks())
        for (double v : b) CHECK(v == 0.0);
    }
  }
}

TEST_CASE("block sign flips leave the norm unchanged bit for bit") {
  Rng rng(43);
  for (int i = 0; i < 300; ++i) {
    const Exponent p = kPs[rng.next_u64() % 5];
    const SpaceSpec s = random_spec(rng, p);
    BlockVector x = random_vector(s, rng, 5.0);
    const double n0 = vec_norm(x);
    const std::int32_t blk =
        static_cast<std::int32_t>(rng.next_u64() % s.block_count());
    for (double& v : x.block(blk)) v = -v;
    CHECK(vec_norm(x) == n0);
  }
}

TEST_CASE("outer norms decrease as p grows") {
  Rng rng(47);
  const double ps[] = {1.0, 1.25, 1.5, 2.0, 3.0, 6.0};
  for (int i = 0; i < 200; ++i) {
    SpaceSpec base = random_spec(rng, Exponent::finite(1.0));
    const BlockVector x = random_vector(base, rng, 1.0);
    double prev = vec_norm(x);
    for (int k = 1; k < 6; ++k) {
      const BlockVector xs(SpaceSpec(Exponent::finite(ps[k]), base.dims()),
                           x.blocks());
      const double cur = vec_norm(xs);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
    const BlockVector xi(SpaceSpec(Exponent::inf(), base.dims()), x.blocks());
    CHECK(vec_norm(xi) <= prev + 1e-12);
  }
}

TEST_CASE("basis vectors have unit norm exactly") {
  Rng rng(53);
  for (int i = 0; i < 100; ++i) {
    const SpaceSpec s = random_spec(rng, kPs[rng.next_u64() % 5]);
    const std::int32_t b =
        static_cast<std::int32_t>(rng.next_u64() % s.block_count());
    const std::int32_t c =
        static_cast<std::int32_t>(rng.next_u64() % s.dim(b));
    const int sign = (rng.next_u64() & 1) ? 1 : -1;
    CHECK(vec_norm(basis_vector(s, b, c, sign)) == 1.0);
  }
}

TEST_CASE("compensated accumulation keeps large spaces honest") {
  // 40 blocks of 3 coordinates: total 120 > 64 triggers the compensated path
  std::vector<std::int32_t> dims(40, 3);
  SpaceSpec s(Exponent::finite(2.0), dims);
  Rng rng(59);
  BlockVector x = random_vector(s, rng, 1.0);
  const double n = vec_norm(x);
  double ref = 0.0;
  for (const auto& b : x.blocks()) {
    double l1 = 0.0;
    for (double v : b) l1 += std::abs(v);
    ref += l1 * l1;
  }
  CHECK(n == doctest::Approx(std::sqrt(ref)).epsilon(1e-13));
}
