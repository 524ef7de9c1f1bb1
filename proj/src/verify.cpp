#include "oplab/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "oplab/parallel.hpp"
#include "oplab/rng.hpp"

namespace oplab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Per-case check recorder. slack = measured - allowed, so a passing check
// contributes a nonpositive slack and max_slack <= 0 iff no violations.
struct CaseCtx {
  std::uint64_t case_seed = 0;
  std::int64_t case_index = 0;
  std::vector<Violation> violations;
  double max_slack = -std::numeric_limits<double>::infinity();
  std::int64_t checks = 0;

  void record(const std::string& what, double measured, double allowed) {
    ++checks;
    const double slack = measured - allowed;
    max_slack = std::max(max_slack, slack);
    if (slack > 0.0)
      violations.push_back(
          {case_seed,
           "case " + std::to_string(case_index) + ": " + what + " (measured " +
               fmt(measured) + ", allowed " + fmt(allowed) + ")",
           slack});
  }
  // lhs <= rhs + tol
  void check_le(const std::string& what, double lhs, double rhs, double tol) {
    record(what, lhs - rhs, tol);
  }
  // |diff| <= tol
  void check_abs(const std::string& what, double diff, double tol) {
    record(what, std::abs(diff), tol);
  }
  void check_true(const std::string& what, bool ok) {
    record(what, ok ? 0.0 : 1.0, 0.0);
  }
};

template <class CaseFn>
VerificationReport run_suite(const char* name, const SuiteParams& params,
                             std::vector<CaseRow>* rows, CaseFn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  if (params.cases < 1) throw ConfigError("cases must be >= 1");
  validate(params.solver);

  std::vector<std::int64_t> ids;
  if (params.only_case) {
    if (*params.only_case < 0 || *params.only_case >= params.cases)
      throw ConfigError("case index out of range [0, " +
                        std::to_string(params.cases) + ")");
    ids = {*params.only_case};
  } else {
    ids.resize(params.cases);
    for (std::int64_t i = 0; i < params.cases; ++i) ids[i] = i;
  }

  std::vector<CaseCtx> out(ids.size());
  par::parallel_for(static_cast<std::int64_t>(ids.size()),
                    [&](std::int64_t slot) {
                      CaseCtx& ctx = out[slot];
                      ctx.case_index = ids[slot];
                      ctx.case_seed = mix_seed(params.seed, ids[slot]);
                      fn(ctx);
                    });

  VerificationReport rep;
  rep.suite = name;
  rep.seed = params.seed;
  rep.cases = static_cast<std::int64_t>(ids.size());
  double maxs = -std::numeric_limits<double>::infinity();
  std::int64_t checks = 0;
  for (const CaseCtx& c : out) {
    checks += c.checks;
    if (c.checks) maxs = std::max(maxs, c.max_slack);
    rep.violations.insert(rep.violations.end(), c.violations.begin(),
                          c.violations.end());
    if (rows)
      rows->push_back({c.case_index, c.case_seed, c.checks,
                       static_cast<std::int64_t>(c.violations.size()),
                       c.checks ? c.max_slack : 0.0});
  }
  rep.max_slack = checks ? maxs : 0.0;
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

BlockVector gen_vector(const SpaceSpec& spec, Rng& rng, double scale) {
  BlockVector x(spec);
  for (std::int32_t i = 0; i < spec.block_count(); ++i)
    for (std::int32_t c = 0; c < spec.dim(i); ++c)
      x.block(i)[c] = rng.uniform(-scale, scale);
  return x;
}

SpaceSpec random_spec(Rng& rng, const Exponent& p, std::int32_t m_max,
                      std::int32_t n_max) {
  const std::int32_t m =
      1 + static_cast<std::int32_t>(rng.next_u64() % m_max);
  std::vector<std::int32_t> dims(m);
  for (std::int32_t& d : dims)
    d = 1 + static_cast<std::int32_t>(rng.next_u64() % n_max);
  return SpaceSpec(p, dims);
}

BlockOperator diag_block(const BlockOperator& T, std::int32_t i) {
  SpaceSpec l1n(Exponent::finite(1.0), {T.domain().dim(i)});
  BlockOperator c(l1n, l1n);
  c.entry(0, 0) = T.entry(i, i);
  return c;
}

double max_diag_l1_norm(const BlockOperator& T) {
  double v = 0.0;
  for (std::int32_t i = 0; i < T.domain().block_count(); ++i)
    v = std::max(v, opnorm_l1_exact(diag_block(T, i)).value);
  return v;
}

// brute-force routes used by suite_solver; these deliberately go through
// apply() + vec_norm() instead of the column extraction the rules use
double brute_l1(const BlockOperator& T) {
  double best = 0.0;
  for (std::int32_t b = 0; b < T.domain().block_count(); ++b)
    for (std::int32_t c = 0; c < T.domain().dim(b); ++c)
      for (const int sign : {+1, -1})
        best = std::max(
            best, vec_norm(apply(T, basis_vector(T.domain(), b, c, sign))));
  return best;
}

double brute_linf(const BlockOperator& T) {
  const SpaceSpec& dom = T.domain();
  const std::int32_t m = dom.block_count();
  std::vector<std::int32_t> ks(m, 0);
  double best = 0.0;
  while (true) {
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
      BlockVector x(dom);
      for (std::int32_t i = 0; i < m; ++i)
        x.block(i)[ks[i]] = (mask >> i) & 1 ? -1.0 : 1.0;
      best = std::max(best, vec_norm(apply(T, x)));
    }
    std::int32_t carry = m - 1;
    while (carry >= 0 && ++ks[carry] == dom.dim(carry)) ks[carry--] = 0;
    if (carry < 0) break;
  }
  return best;
}

// row rule for square operators on an l-infinity sum of scalar blocks
double row_rule_scalar_linf(const BlockOperator& T) {
  double best = 0.0;
  for (std::int32_t i = 0; i < T.codomain().block_count(); ++i) {
    double row = 0.0;
    for (std::int32_t j = 0; j < T.domain().block_count(); ++j)
      row += std::abs(T.entry(i, j)(0, 0));
    best = std::max(best, row);
  }
  return best;
}

void check_witness(CaseCtx& ctx, const BlockOperator& T, double lower,
                   const BlockVector& witness, const char* what) {
  ctx.check_abs(std::string(what) + ": witness is a unit vector",
                vec_norm(witness) - 1.0, 1e-12);
  ctx.check_le(std::string(what) + ": witness attains the lower bound", lower,
               vec_norm(apply(T, witness)), 1e-9);
}

}  // namespace

BlockOperator gen_operator(const SpaceSpec& spec, std::uint64_t seed,
                           double scale) {
  return gen_operator(spec, seed, scale, Ensemble::uniform);
}

BlockOperator gen_operator(const SpaceSpec& spec, std::uint64_t seed,
                           double scale, Ensemble ensemble) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw InvalidInputError("scale must be a positive real");
  Rng rng(seed);
  BlockOperator T(spec, spec);
  for (std::int32_t i = 0; i < spec.block_count(); ++i)
    for (std::int32_t j = 0; j < spec.block_count(); ++j) {
      DenseMatrix& m = T.entry(i, j);
      for (std::int32_t r = 0; r < m.rows(); ++r)
        for (std::int32_t c = 0; c < m.cols(); ++c) {
          if (ensemble == Ensemble::uniform) {
            m(r, c) = rng.uniform(-scale, scale);
          } else {
            double v = 0.0;
            do {
              v = scale * std::tan(kPi * (rng.uniform01() - 0.5));
            } while (!std::isfinite(v));
            m(r, c) = v;
          }
        }
    }
  return T;
}

VerificationReport suite_embedding(const SuiteParams& params,
                                   std::vector<CaseRow>* rows) {
  if (params.embed_n_max < 1) throw ConfigError("n_max must be >= 1");
  return run_suite("embedding", params, rows, [&](CaseCtx& ctx) {
    Rng rng(ctx.case_seed);
    const std::int32_t n =
        1 + static_cast<std::int32_t>(rng.next_u64() % params.embed_n_max);
    SpaceSpec l1n(Exponent::finite(1.0), {n});
    const BlockVector a = gen_vector(l1n, rng, 1.0);

    const BlockOperator E = embed_l1(a);
    ctx.check_abs("||embed_l1(a)|| equals ||a||_1",
                  opnorm_l1_exact(E).value - vec_norm(a), 1e-12);
    ctx.check_true("first_column(embed_l1(a)) == a", first_column(E) == a);

    const BlockOperator T =
        gen_operator(l1n, rng.next_u64(), 1.0, params.ensemble);
    ctx.check_le("||first_column(T)||_1 <= ||T||",
                 vec_norm(first_column(T)), opnorm_l1_exact(T).value, 1e-12);
  });
}

VerificationReport suite_tong(const SuiteParams& params,
                              std::vector<CaseRow>* rows) {
  if (params.ps.empty()) throw ConfigError("need at least one exponent");
  return run_suite("tong", params, rows, [&](CaseCtx& ctx) {
    const Exponent p = params.ps[ctx.case_index % params.ps.size()];
    Rng rng(ctx.case_seed);
    const SpaceSpec spec = random_spec(rng, p, params.m_max, params.n_max);
    const std::int32_t m = spec.block_count();
    const BlockOperator T =
        gen_operator(spec, rng.next_u64(), 1.0, params.ensemble);
    const TongTrace trace = tong_sequence(T);

    // agreement masks: exact negation on the handled diagonal, exact zeros on
    // the handled off-diagonal region, untouched grid elsewhere
    for (std::int32_t n = 0; n < m; ++n) {
      const BlockOperator& S = trace.steps[n];
      double neg = 0.0, zero = 0.0;
      bool untouched = true;
      for (std::int32_t i = 0; i < m; ++i)
        for (std::int32_t j = 0; j < m; ++j) {
          const DenseMatrix& s = S.entry(i, j);
          const DenseMatrix& t = T.entry(i, j);
          if (i > n && j > n) {
            untouched = untouched && (s == t);
          } else if (i == j && i <= n) {
            for (std::size_t k = 0; k < s.data().size(); ++k)
              neg = std::max(neg, std::abs(s.data()[k] + t.data()[k]));
          } else {
            for (const double v : s.data()) zero = std::max(zero, std::abs(v));
          }
        }
      const std::string tag = "step " + std::to_string(n + 1);
      ctx.check_abs(tag + ": negated diagonal agreement", neg, 1e-15);
      ctx.check_abs(tag + ": zeroed region agreement", zero, 0.0);
      ctx.check_true(tag + ": untouched region equals source", untouched);
    }

    {
      const BlockOperator D = delta(xi(T), spec.outer());
      const BlockOperator negD = op_lincomb(-1.0, D, 0.0, D);
      ctx.check_true("final step equals -delta(xi(T))",
                     trace.steps[m - 1] == negD);
    }

    SolverConfig cfg = params.solver;
    cfg.seed = rng.next_u64();

    const bool exact = p.is_one() || p.is_inf();
    double lower_T = 0.0;
    if (exact) {
      const auto rule = p.is_one() ? opnorm_l1_exact : opnorm_linf_exact;
      const double norm_T = rule(T).value;
      lower_T = norm_T;
      for (std::int32_t n = 0; n < m; ++n)
        ctx.check_le("||S(" + std::to_string(n + 1) + ")|| <= ||T||",
                     rule(trace.steps[n]).value, norm_T, 1e-12);
      ctx.check_abs("column flip is an isometry",
                    rule(flip_block_column(T, 0)).value - norm_T, 1e-12);
      ctx.check_abs("row flip is an isometry",
                    rule(flip_block_row(T, 0)).value - norm_T, 1e-12);
    } else {
      const NormEstimate est = opnorm(T, cfg);
      lower_T = est.lower;
      for (std::int32_t n = 0; n < m; ++n) {
        const NormEstimate es = opnorm(trace.steps[n], cfg);
        ctx.check_le("lower(S(" + std::to_string(n + 1) + ")) <= upper(T)",
                     es.lower, est.upper, 1e-9);
      }
    }
    ctx.check_le("max_i ||T_ii|| <= lower(T)", max_diag_l1_norm(T), lower_T,
                 1e-12);
  });
}

VerificationReport suite_solver(const SuiteParams& params,
                                std::vector<CaseRow>* rows) {
  if (params.ps.empty()) throw ConfigError("need at least one exponent");
  return run_suite("solver", params, rows, [&](CaseCtx& ctx) {
    Rng rng(ctx.case_seed);
    SolverConfig cfg = params.solver;
    cfg.seed = rng.next_u64();

    switch (ctx.case_index % 5) {
      case 0: {  // p = 2 scalar blocks against the spectral oracle
        const std::int32_t m =
            2 + static_cast<std::int32_t>(rng.next_u64() % 3);
        SpaceSpec spec(Exponent::finite(2.0),
                       std::vector<std::int32_t>(m, 1));
        const BlockOperator T =
            gen_operator(spec, rng.next_u64(), 1.0, params.ensemble);
        const double sigma = spectral_norm_power(flatten_dense(T),
                                                 rng.next_u64());
        const NormEstimate est = opnorm(T, cfg);
        const double tol = 1e-6 * std::max(1.0, sigma);
        ctx.check_le("oracle value <= upper", sigma, est.upper, tol);
        ctx.check_abs("lower agrees with spectral oracle", est.lower - sigma,
                      tol);
        check_witness(ctx, T, est.lower, est.witness, "p2");
        break;
      }
      case 1: {  // l1 column rule vs brute force over signed basis vectors
        Rng r2(rng.next_u64());
        const SpaceSpec spec = random_spec(r2, Exponent::finite(1.0),
                                           params.m_max, params.n_max);
        const BlockOperator T =
            gen_operator(spec, r2.next_u64(), 1.0, params.ensemble);
        const ExactNorm e = opnorm_l1_exact(T);
        ctx.check_abs("l1 rule equals brute force", e.value - brute_l1(T),
                      1e-12);
        check_witness(ctx, T, e.value, e.witness, "l1");
        break;
      }
      case 2: {  // l-infinity rule vs brute force, plus the scalar row rule
        Rng r2(rng.next_u64());
        const SpaceSpec spec =
            random_spec(r2, Exponent::inf(), params.m_max, params.n_max);
        const BlockOperator T =
            gen_operator(spec, r2.next_u64(), 1.0, params.ensemble);
        const ExactNorm e = opnorm_linf_exact(T);
        ctx.check_abs("linf rule equals brute force", e.value - brute_linf(T),
                      1e-12);
        check_witness(ctx, T, e.value, e.witness, "linf");

        const std::int32_t k =
            1 + static_cast<std::int32_t>(r2.next_u64() % 6);
        SpaceSpec scal(Exponent::inf(), std::vector<std::int32_t>(k, 1));
        const BlockOperator S =
            gen_operator(scal, r2.next_u64(), 1.0, params.ensemble);
        ctx.check_abs("row rule equals sign enumeration",
                      opnorm_linf_exact(S).value - row_rule_scalar_linf(S),
                      1e-12);
        break;
      }
      case 3: {  // sampling oracle never beats the certified upper bound
        const Exponent p = params.ps[(ctx.case_index / 5) % params.ps.size()];
        Rng r2(rng.next_u64());
        const SpaceSpec spec = random_spec(r2, p, params.m_max, params.n_max);
        const BlockOperator T =
            gen_operator(spec, r2.next_u64(), 1.0, params.ensemble);
        const SamplingBound sb = sampling_oracle(T, 200, r2.next_u64());
        const NormEstimate est = opnorm(T, cfg);
        ctx.check_le("sampling lower <= upper", sb.lower, est.upper, 1e-9);
        if (p.is_one() || p.is_inf())
          ctx.check_le("sampling lower <= exact value", sb.lower, est.lower,
                       1e-12);
        check_witness(ctx, T, sb.lower, sb.witness, "sampling");
        check_witness(ctx, T, est.lower, est.witness, "opnorm");
        break;
      }
      default: {  // homogeneity and flip invariance of the ascent solver
        Exponent p = Exponent::finite(2.0);
        for (const Exponent& q : params.ps)
          if (!q.is_inf() && !q.is_one()) p = q;
        Rng r2(rng.next_u64());
        const SpaceSpec spec =
            random_spec(r2, p, std::min(params.m_max, 3), params.n_max);
        const BlockOperator T =
            gen_operator(spec, r2.next_u64(), 1.0, params.ensemble);
        const double u = r2.uniform01();
        const double c =
            (r2.next_u64() & 1 ? -1.0 : 1.0) * (0.25 + 2.75 * u);
        const NormEstimate est = opnorm(T, cfg);
        const NormEstimate estc = opnorm(op_lincomb(c, T, 0.0, T), cfg);
        const double ac = std::abs(c);
        ctx.check_abs("homogeneity of lower", estc.lower - ac * est.lower,
                      1e-9 * std::max(1.0, ac * est.lower));
        ctx.check_abs("homogeneity of upper", estc.upper - ac * est.upper,
                      1e-9 * std::max(1.0, ac * est.upper));

        const std::int32_t j = static_cast<std::int32_t>(
            r2.next_u64() % spec.block_count());
        const NormEstimate estf = opnorm(flip_block_column(T, j), cfg);
        ctx.check_abs("flip invariance of lower", estf.lower - est.lower,
                      1e-9 * std::max(1.0, est.lower));
        ctx.check_abs("flip invariance of upper", estf.upper - est.upper,
                      1e-9 * std::max(1.0, est.upper));
        break;
      }
    }
  });
}

VerificationReport suite_chain(const SuiteParams& params,
                               std::vector<CaseRow>* rows) {
  if (params.chain_m < 1) throw ConfigError("chain m must be >= 1");
  return run_suite("chain", params, rows, [&](CaseCtx& ctx) {
    const std::int32_t m = params.chain_m;
    Rng rng(ctx.case_seed);
    SpaceSpec l1m(Exponent::finite(1.0), {m});
    const BlockVector a = gen_vector(l1m, rng, 1.0);
    double amax = 0.0;
    for (const double v : a.block(0)) amax = std::max(amax, std::abs(v));

    // route coordinate a_n to the rank-one embedding of a_n e_1 in block n
    std::vector<BlockOperator> comps;
    comps.reserve(m);
    for (std::int32_t n = 1; n <= m; ++n) {
      SpaceSpec l1n(Exponent::finite(1.0), {n});
      BlockVector v(l1n);
      v.block(0)[0] = a.block(0)[n - 1];
      comps.push_back(embed_l1(v));
    }

    double dnorm = 0.0;
    bool recovered = true;
    for (std::int32_t n = 0; n < m; ++n) {
      const ExactNorm e = opnorm_l1_exact(comps[n]);
      dnorm = std::max(dnorm, e.value);
      const BlockVector fc = first_column(comps[n]);
      recovered = recovered && fc.block(0)[0] == a.block(0)[n];
      for (std::int32_t r = 1; r < n + 1; ++r)
        recovered = recovered && fc.block(0)[r] == 0.0;
    }
    ctx.check_abs("sup of block norms equals max |a_n|", dnorm - amax, 1e-9);
    ctx.check_true("first-column recovery returns a exactly", recovered);

    std::vector<std::int32_t> fdims(m);
    for (std::int32_t n = 0; n < m; ++n) fdims[n] = n + 1;
    SpaceSpec Fm(Exponent::inf(), fdims);
    BlockVector fcopy(Fm);
    for (std::int32_t n = 0; n < m; ++n)
      fcopy.block(n)[0] = a.block(0)[n];
    ctx.check_abs("natural copy in the sup-normed truncation is isometric",
                  vec_norm(fcopy) - amax, 1e-9);

    const BlockOperator D = delta(comps, params.chain_p);
    SolverConfig cfg = params.solver;
    cfg.seed = rng.next_u64();
    const NormEstimate est = opnorm(D, cfg);
    ctx.check_abs("diagonal embedding attains max |a_n|", est.lower - amax,
                  1e-9);
    ctx.check_le("max |a_n| <= upper bound", amax, est.upper, 1e-9);
    check_witness(ctx, D, est.lower, est.witness, "delta");

    ctx.check_true("xi inverts delta exactly", xi(D) == comps);
  });
}

double spectral_norm_power(const DenseMatrix& a, std::uint64_t seed) {
  const std::int32_t rows = a.rows();
  const std::int32_t cols = a.cols();
  Rng rng(seed);
  std::vector<double> v(cols), av(rows), u(cols);
  auto l2 = [](const std::vector<double>& x) {
    double s = 0.0;
    for (const double t : x) s += t * t;
    return std::sqrt(s);
  };
  auto redraw = [&] {
    for (double& t : v) t = rng.normal();
    const double n = l2(v);
    if (n > 0.0)
      for (double& t : v) t /= n;
    return n > 0.0;
  };
  while (!redraw()) {
  }
  double lam = 0.0, lam_prev = -1.0;
  int stall = 0;
  for (int iter = 0; iter < 200000; ++iter) {
    for (std::int32_t r = 0; r < rows; ++r) {
      double s = 0.0;
      for (std::int32_t c = 0; c < cols; ++c) s += a(r, c) * v[c];
      av[r] = s;
    }
    lam = l2(av);
    if (lam == 0.0) {
      if (!redraw()) return 0.0;
      continue;
    }
    for (std::int32_t c = 0; c < cols; ++c) {
      double s = 0.0;
      for (std::int32_t r = 0; r < rows; ++r) s += a(r, c) * av[r];
      u[c] = s;
    }
    const double un = l2(u);
    if (un == 0.0) break;
    for (std::int32_t c = 0; c < cols; ++c) v[c] = u[c] / un;
    if (lam_prev >= 0.0 &&
        std::abs(lam - lam_prev) <= 1e-15 * std::max(lam, 1.0)) {
      if (++stall >= 3) break;
    } else {
      stall = 0;
    }
    lam_prev = lam;
  }
  return lam;
}

DenseMatrix flatten_dense(const BlockOperator& T) {
  DenseMatrix full(static_cast<std::int32_t>(T.codomain().total_dim()),
                   static_cast<std::int32_t>(T.domain().total_dim()));
  std::int32_t row0 = 0;
  for (std::int32_t i = 0; i < T.codomain().block_count(); ++i) {
    std::int32_t col0 = 0;
    for (std::int32_t j = 0; j < T.domain().block_count(); ++j) {
      const DenseMatrix& M = T.entry(i, j);
      for (std::int32_t r = 0; r < M.rows(); ++r)
        for (std::int32_t c = 0; c < M.cols(); ++c)
          full(row0 + r, col0 + c) = M(r, c);
      col0 += M.cols();
    }
    row0 += T.codomain().dim(i);
  }
  return full;
}

}  // namespace oplab
