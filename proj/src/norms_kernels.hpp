#pragma once

// Per-index kernels behind the operator-norm drivers. norms.cpp schedules
// them with OpenMP, norms_serial.cpp with plain loops; both must produce
// bit-identical results, which pins down the rules used here:
//   - every random draw is keyed by (seed, item index), never by schedule;
//   - reductions go through Cand/max combines that are associative and
//     commutative (strict improvement, index tie-breaks).

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "accum.hpp"
#include "oplab/norms.hpp"
#include "oplab/rng.hpp"

namespace oplab::detail {

struct FlatLayout {
  std::vector<std::int64_t> offset;  // block starts, size blocks()+1
  Exponent outer = Exponent::finite(2.0);
  bool compensated = false;

  std::int32_t blocks() const {
    return static_cast<std::int32_t>(offset.size()) - 1;
  }
  std::int64_t total() const { return offset.back(); }
};

inline FlatLayout make_layout(const SpaceSpec& spec) {
  FlatLayout l;
  l.offset.resize(spec.block_count() + 1);
  l.offset[0] = 0;
  for (std::int32_t i = 0; i < spec.block_count(); ++i)
    l.offset[i + 1] = l.offset[i] + spec.dim(i);
  l.outer = spec.outer();
  l.compensated = spec.total_dim() > 64;
  return l;
}

// Mirrors vec_norm arithmetic exactly (same order, same compensation rule).
inline double mixed_norm_flat(const FlatLayout& l, const double* y,
                              double* block_sums) {
  const std::int32_t m = l.blocks();
  for (std::int32_t i = 0; i < m; ++i)
    block_sums[i] = l1_sum({y + l.offset[i],
                            static_cast<std::size_t>(l.offset[i + 1] - l.offset[i])},
                           l.compensated);
  std::span<const double> bs(block_sums, static_cast<std::size_t>(m));
  if (l.outer.is_inf()) return max_nonneg(bs);
  if (l.outer.is_one()) return sum_nonneg(bs, l.compensated);
  return lp_nonneg(bs, l.outer.value(), l.compensated);
}

// ||t||_p on signed coordinates, scaled against overflow.
inline double lp_signed(std::span<const double> t, double p) {
  double s = 0.0;
  for (const double x : t) s = std::max(s, std::abs(x));
  if (s == 0.0) return 0.0;
  double acc = 0.0;
  for (const double x : t) acc += pow_fast(std::abs(x) / s, p);
  return s * pow_fast(acc, 1.0 / p);
}

// All basis-vector images of T, flattened: column g holds T e_g where g runs
// over domain coordinates in (block, coord) order.
struct FlatColumns {
  FlatLayout cod;
  std::vector<std::int64_t> dom_offset;  // domain block starts
  std::vector<std::int32_t> dom_dims;
  std::int64_t n_cols = 0;
  std::vector<double> data;  // column-major, cod.total() x n_cols

  const double* col(std::int64_t g) const { return data.data() + g * cod.total(); }
};

inline FlatColumns extract_columns(const BlockOperator& T) {
  FlatColumns fc;
  fc.cod = make_layout(T.codomain());
  const SpaceSpec& dom = T.domain();
  fc.dom_offset.resize(dom.block_count() + 1);
  fc.dom_offset[0] = 0;
  for (std::int32_t j = 0; j < dom.block_count(); ++j) {
    fc.dom_offset[j + 1] = fc.dom_offset[j] + dom.dim(j);
    fc.dom_dims.push_back(dom.dim(j));
  }
  fc.n_cols = dom.total_dim();
  const std::int64_t N = fc.cod.total();
  fc.data.assign(static_cast<std::size_t>(N) * fc.n_cols, 0.0);
  for (std::int32_t j = 0; j < dom.block_count(); ++j)
    for (std::int32_t c = 0; c < dom.dim(j); ++c) {
      double* col = fc.data.data() + (fc.dom_offset[j] + c) * N;
      for (std::int32_t i = 0; i < T.codomain().block_count(); ++i) {
        const DenseMatrix& M = T.entry(i, j);
        for (std::int32_t r = 0; r < M.rows(); ++r)
          col[fc.cod.offset[i] + r] = M(r, c);
      }
    }
  return fc;
}

// Best codomain column norm with the lowest (block, coord) tie-break. This is
// simultaneously the l1 column rule and the mandatory basis-witness sweep
// (signed copies of a basis vector have bit-identical image norms, so only
// the +1 representative is evaluated).
struct BasisBest {
  double value = -1.0;
  std::int32_t block = 0;
  std::int32_t coord = 0;
};

inline BasisBest best_basis_column(const FlatColumns& fc) {
  BasisBest best;
  std::vector<double> bs(fc.cod.blocks());
  for (std::int32_t j = 0; j < static_cast<std::int32_t>(fc.dom_dims.size()); ++j)
    for (std::int32_t c = 0; c < fc.dom_dims[j]; ++c) {
      const double v =
          mixed_norm_flat(fc.cod, fc.col(fc.dom_offset[j] + c), bs.data());
      if (v > best.value) best = {v, j, c};
    }
  return best;
}

// Selection odometer: block 0 is the most significant digit.
inline void decode_selection(std::int64_t sel,
                             std::span<const std::int32_t> dims,
                             std::int32_t* out) {
  for (std::int32_t i = static_cast<std::int32_t>(dims.size()) - 1; i >= 0; --i) {
    out[i] = static_cast<std::int32_t>(sel % dims[i]);
    sel /= dims[i];
  }
}

inline std::int64_t selection_count(std::span<const std::int32_t> dims,
                                    std::int64_t limit) {
  std::int64_t n = 1;
  for (const std::int32_t d : dims) {
    n *= d;
    if (n > limit) return -1;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Projected ascent on the lp sphere (inner problem of one selection).

// Columns are canonicalized so each column's first nonzero entry is positive
// and scaled-copy problems stay well conditioned; this removes exactly the
// sign freedom that block-column flips act on, making flip invariance exact.
struct InnerProblem {
  const FlatLayout* cod = nullptr;
  std::int32_t m = 0;
  std::vector<double> col;           // cod->total() x m, column-major
  std::vector<double> col_norm;      // codomain norm of each column
  std::vector<std::int8_t> col_sign; // canonicalization signs
};

inline void build_inner(InnerProblem& P, const FlatLayout& cod,
                        std::span<const double* const> columns) {
  const std::int64_t N = cod.total();
  P.cod = &cod;
  P.m = static_cast<std::int32_t>(columns.size());
  P.col.assign(static_cast<std::size_t>(N) * P.m, 0.0);
  P.col_norm.assign(P.m, 0.0);
  P.col_sign.assign(P.m, 1);
  std::vector<double> bs(cod.blocks());
  for (std::int32_t k = 0; k < P.m; ++k) {
    const double* src = columns[k];
    double* dst = P.col.data() + static_cast<std::size_t>(k) * N;
    std::int8_t sign = 1;
    for (std::int64_t r = 0; r < N; ++r) {
      if (src[r] != 0.0) {
        sign = src[r] > 0.0 ? 1 : -1;
        break;
      }
    }
    if (sign > 0) {
      for (std::int64_t r = 0; r < N; ++r) dst[r] = src[r];
    } else {
      for (std::int64_t r = 0; r < N; ++r) dst[r] = -src[r];
    }
    P.col_sign[k] = sign;
    P.col_norm[k] = mixed_norm_flat(cod, dst, bs.data());
  }
}

// Hoelder column bound: || (||col_k||_cod)_k ||_{p*}.
inline double holder_upper(const InnerProblem& P, double p) {
  const double pstar = p / (p - 1.0);
  return lp_nonneg({P.col_norm.data(), static_cast<std::size_t>(P.m)}, pstar,
                   P.m > 64);
}

struct AscentScratch {
  std::vector<double> t, best_t, y, bsum, w, phi, g;
  void resize(std::int32_t m, const FlatLayout& cod) {
    t.assign(m, 0.0);
    best_t.assign(m, 0.0);
    y.assign(cod.total(), 0.0);
    bsum.assign(cod.blocks(), 0.0);
    w.assign(cod.blocks(), 0.0);
    phi.assign(cod.total(), 0.0);
    g.assign(m, 0.0);
  }
};

inline double eval_objective(const InnerProblem& P, std::span<const double> t,
                             AscentScratch& s) {
  const FlatLayout& cod = *P.cod;
  const std::int64_t N = cod.total();
  std::fill(s.y.begin(), s.y.end(), 0.0);
  for (std::int32_t k = 0; k < P.m; ++k) {
    const double tk = t[k];
    if (tk == 0.0 || P.col_norm[k] == 0.0) continue;
    const double* col = P.col.data() + static_cast<std::size_t>(k) * N;
    for (std::int64_t r = 0; r < N; ++r) s.y[r] += tk * col[r];
  }
  return mixed_norm_flat(cod, s.y.data(), s.bsum.data());
}

// One ascent run from the seed already stored in s.t. Each step moves to the
// dual-norming point of a norming-functional subgradient and renormalizes to
// the sphere (valid: the objective is positively homogeneous), so values are
// monotone and no step size is needed. Stops when the relative gain drops
// below tol. Returns false when the seed hits objective 0 (A t = 0), in
// which case the caller restarts from a fresh random seed.
inline bool ascend_one(const InnerProblem& P, double p, double pstar,
                       std::int32_t max_iters, double tol, AscentScratch& s,
                       double& best_out) {
  const FlatLayout& cod = *P.cod;
  const std::int64_t N = cod.total();
  const std::int32_t m = P.m;
  const std::int32_t nb = cod.blocks();

  const double tn = lp_signed({s.t.data(), static_cast<std::size_t>(m)}, p);
  if (tn == 0.0) return false;
  for (std::int32_t k = 0; k < m; ++k) s.t[k] /= tn;

  double best = -1.0;
  double f_prev = -1.0;
  for (std::int32_t iter = 0; iter < max_iters; ++iter) {
    const double f = eval_objective(P, s.t, s);
    if (f == 0.0) {
      if (best < 0.0) return false;
      break;
    }
    if (f > best) {
      best = f;
      s.best_t = s.t;
    }
    if (f_prev >= 0.0 && f - f_prev <= tol * f) break;
    f_prev = f;

    // norming functional of y, blockwise: weight * sign pattern
    if (cod.outer.is_inf()) {
      std::int32_t imax = 0;
      for (std::int32_t i = 1; i < nb; ++i)
        if (s.bsum[i] > s.bsum[imax]) imax = i;
      for (std::int32_t i = 0; i < nb; ++i) s.w[i] = (i == imax) ? 1.0 : 0.0;
    } else {
      const double q = cod.outer.value();
      for (std::int32_t i = 0; i < nb; ++i)
        s.w[i] = (q == 1.0) ? 1.0 : pow_fast(s.bsum[i] / f, q - 1.0);
    }
    for (std::int32_t i = 0; i < nb; ++i) {
      const double wi = s.w[i];
      for (std::int64_t r = cod.offset[i]; r < cod.offset[i + 1]; ++r) {
        const double yr = s.y[r];
        s.phi[r] = (yr > 0.0) ? wi : (yr < 0.0 ? -wi : 0.0);
      }
    }

    // subgradient g_k = phi(col_k); next iterate = dual-norming point of g
    double gmax = 0.0;
    for (std::int32_t k = 0; k < m; ++k) {
      double acc = 0.0;
      if (P.col_norm[k] != 0.0) {
        const double* col = P.col.data() + static_cast<std::size_t>(k) * N;
        for (std::int64_t r = 0; r < N; ++r) acc += s.phi[r] * col[r];
      }
      s.g[k] = acc;
      gmax = std::max(gmax, std::abs(acc));
    }
    if (gmax == 0.0) break;
    for (std::int32_t k = 0; k < m; ++k) {
      const double u = s.g[k] / gmax;
      const double mag = pow_fast(std::abs(u), pstar - 1.0);
      s.t[k] = (u > 0.0) ? mag : (u < 0.0 ? -mag : 0.0);
    }
    const double nn = lp_signed({s.t.data(), static_cast<std::size_t>(m)}, p);
    if (nn == 0.0) break;
    for (std::int32_t k = 0; k < m; ++k) s.t[k] /= nn;
  }
  best_out = best < 0.0 ? 0.0 : best;
  return true;
}

// Seed layout per selection: indices [0, restarts) are random directions,
// [restarts, restarts + m) the unit coordinate vectors. Signed and antipodal
// seed copies are omitted: ascent trajectories are exactly sign-symmetric in
// IEEE arithmetic, so they repeat the retained runs value-for-value.
inline std::int32_t seeds_per_problem(const SolverConfig& cfg, std::int32_t m) {
  return cfg.restarts + m;
}

struct SeedOutcome {
  double value = 0.0;
  std::vector<double> t;  // canonical coordinates
};

inline SeedOutcome run_seed(const InnerProblem& P, double p, double pstar,
                            const SolverConfig& cfg, std::uint64_t problem_seed,
                            std::int32_t seed_idx, AscentScratch& s) {
  const std::int32_t m = P.m;
  Rng rng(mix_seed(problem_seed, static_cast<std::uint64_t>(seed_idx)));
  if (seed_idx < cfg.restarts) {
    for (std::int32_t k = 0; k < m; ++k) s.t[k] = rng.normal();
  } else {
    std::fill(s.t.begin(), s.t.end(), 0.0);
    s.t[seed_idx - cfg.restarts] = 1.0;
  }
  double value = 0.0;
  for (int attempt = 0; attempt < 5; ++attempt) {
    if (ascend_one(P, p, pstar, cfg.max_iters, cfg.tol, s, value))
      return {value, s.best_t};
    for (std::int32_t k = 0; k < m; ++k) s.t[k] = rng.normal();
  }
  // objective is 0 on every attempted ray; report 0 with a unit witness
  std::fill(s.best_t.begin(), s.best_t.end(), 0.0);
  s.best_t[0] = 1.0;
  return {0.0, s.best_t};
}

// eps-net certificate on the lp sphere for m <= 3: faces of the unit cube are
// gridded, radially projected to the sphere, and the Hoelder bound serves as
// the Lipschitz constant over the covering radius.
struct GridCertOut {
  double upper = 0.0;
  double net_best = 0.0;
  std::vector<double> net_t;
};

inline GridCertOut grid_certificate(const InnerProblem& P, double p,
                                    double holder, std::int32_t resolution,
                                    AscentScratch& s) {
  const std::int32_t m = P.m;
  GridCertOut out;
  out.net_t.assign(m, 0.0);
  if (m == 1) {
    s.t[0] = 1.0;
    const double f = eval_objective(P, s.t, s);
    out.upper = f;  // the sphere is {+1, -1} and both give this value
    out.net_best = f;
    out.net_t[0] = 1.0;
    return out;
  }
  const std::int32_t R = resolution;
  double best = -1.0;
  std::vector<double> u(m);
  std::vector<std::int32_t> idx(m - 1);
  for (std::int32_t face = 0; face < 2 * m; ++face) {
    const std::int32_t fixed = face / 2;
    const double sign = (face % 2 == 0) ? 1.0 : -1.0;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      std::int32_t pos = 0;
      for (std::int32_t k = 0; k < m; ++k) {
        if (k == fixed) {
          u[k] = sign;
        } else {
          u[k] = -1.0 + (2.0 * idx[pos] + 1.0) / R;
          ++pos;
        }
      }
      const double un = lp_signed({u.data(), u.size()}, p);
      for (std::int32_t k = 0; k < m; ++k) s.t[k] = u[k] / un;
      const double f = eval_objective(P, s.t, s);
      if (f > best) {
        best = f;
        out.net_t.assign(s.t.begin(), s.t.end());
      }
      std::int32_t carry = m - 2;
      while (carry >= 0 && ++idx[carry] == R) idx[carry--] = 0;
      if (carry < 0) break;
    }
  }
  // covering radius: cube-face cells have l-inf radius 1/R; normalization to
  // the sphere at most doubles lp distance (both u's have ||u||_p >= 1)
  const double delta = 2.0 * std::pow(static_cast<double>(m - 1), 1.0 / p) / R;
  out.net_best = best;
  out.upper = best + holder * delta;
  return out;
}

// ---------------------------------------------------------------------------
// Reduction candidate shared by the drivers.

struct Cand {
  double value = -1.0;
  std::int64_t sel = -1;
  std::int64_t item = -1;  // seed index / sign mask / sample index
  std::vector<double> t;   // inner weights where applicable

  // strict improvement, ties to the lowest (sel, item): associative and
  // commutative, so reduction order never matters
  bool improves(double v, std::int64_t s, std::int64_t it) const {
    if (v != value) return v > value;
    if (s != sel) return s < sel;
    return it < item;
  }
  void take(double v, std::int64_t s, std::int64_t it,
            const std::vector<double>* weights) {
    value = v;
    sel = s;
    item = it;
    if (weights) t = *weights;
  }
  void merge(const Cand& o) {
    if (o.sel >= 0 && improves(o.value, o.sel, o.item)) *this = o;
  }
};

// ---------------------------------------------------------------------------
// Shared enumeration context for finite p in (1, inf).

struct EnumContext {
  FlatColumns cols;
  std::int64_t sel_count = 0;
  std::int32_t m = 0;  // domain blocks
  double p = 2.0;
  double pstar = 2.0;
  SolverConfig cfg;
  std::int32_t seeds = 0;

  std::int64_t task_count() const {
    return sel_count * static_cast<std::int64_t>(seeds);
  }
};

inline void build_selection_problem(const EnumContext& ctx, std::int64_t sel,
                                    std::vector<std::int32_t>& ks,
                                    std::vector<const double*>& ptrs,
                                    InnerProblem& P) {
  decode_selection(sel, ctx.cols.dom_dims, ks.data());
  for (std::int32_t i = 0; i < ctx.m; ++i)
    ptrs[i] = ctx.cols.col(ctx.cols.dom_offset[i] + ks[i]);
  build_inner(P, ctx.cols.cod, {ptrs.data(), ptrs.size()});
}

struct EnumScratch {
  std::vector<std::int32_t> ks;
  std::vector<const double*> ptrs;
  InnerProblem P;
  std::int64_t cached_sel = -1;  // P already holds this selection's problem
  AscentScratch as;
  void resize(const EnumContext& ctx) {
    ks.assign(ctx.m, 0);
    ptrs.assign(ctx.m, nullptr);
    cached_sel = -1;
    as.resize(ctx.m, ctx.cols.cod);
  }
};

inline void ensure_problem(const EnumContext& ctx, std::int64_t sel,
                           EnumScratch& es) {
  if (es.cached_sel == sel) return;
  build_selection_problem(ctx, sel, es.ks, es.ptrs, es.P);
  es.cached_sel = sel;
}

// One (selection, seed) ascent; the candidate's t is in canonical signs.
inline Cand enum_run_task(const EnumContext& ctx, std::int64_t task,
                          EnumScratch& es) {
  const std::int64_t sel = task / ctx.seeds;
  const std::int32_t seed_idx = static_cast<std::int32_t>(task % ctx.seeds);
  ensure_problem(ctx, sel, es);
  const std::uint64_t problem_seed = mix_seed(ctx.cfg.seed, sel);
  const SeedOutcome r =
      run_seed(es.P, ctx.p, ctx.pstar, ctx.cfg, problem_seed, seed_idx, es.as);
  Cand c;
  // map the witness back to original column signs
  std::vector<double> t(r.t);
  for (std::int32_t k = 0; k < ctx.m; ++k) t[k] *= es.P.col_sign[k];
  c.take(r.value, sel, seed_idx, &t);
  return c;
}

// Per-selection upper bound (Hoelder, optionally net-tightened); the net also
// yields a lower-bound candidate, reported with item id just past the seeds.
struct SelUpper {
  double upper = 0.0;
  Cand net_cand;
};

inline SelUpper enum_selection_upper(const EnumContext& ctx, std::int64_t sel,
                                     EnumScratch& es) {
  ensure_problem(ctx, sel, es);
  SelUpper su;
  su.upper = holder_upper(es.P, ctx.p);
  if (ctx.cfg.grid_cert && ctx.m <= 3) {
    const GridCertOut g = grid_certificate(es.P, ctx.p, su.upper,
                                           ctx.cfg.grid_resolution, es.as);
    su.upper = std::min(su.upper, g.upper);
    std::vector<double> t(g.net_t);
    for (std::int32_t k = 0; k < ctx.m; ++k) t[k] *= es.P.col_sign[k];
    su.net_cand.take(g.net_best, sel, ctx.seeds, &t);
  }
  return su;
}

// ---------------------------------------------------------------------------
// l-infinity domain: exact enumeration of blockwise signed basis vectors.

struct LinfContext {
  FlatColumns cols;
  std::int64_t sel_count = 0;
  std::int32_t m = 0;
};

// Evaluates all 2^m sign patterns of one selection; mask bit i negates block
// i, masks scanned in increasing order so ties keep the +1-heavy pattern.
inline Cand linf_eval_selection(const LinfContext& ctx, std::int64_t sel,
                                std::vector<std::int32_t>& ks,
                                std::vector<const double*>& ptrs,
                                std::vector<double>& y,
                                std::vector<double>& bs) {
  decode_selection(sel, ctx.cols.dom_dims, ks.data());
  const std::int64_t N = ctx.cols.cod.total();
  for (std::int32_t i = 0; i < ctx.m; ++i)
    ptrs[i] = ctx.cols.col(ctx.cols.dom_offset[i] + ks[i]);
  Cand best;
  const std::uint64_t nmask = 1ULL << ctx.m;
  for (std::uint64_t mask = 0; mask < nmask; ++mask) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::int32_t i = 0; i < ctx.m; ++i) {
      const double s = (mask >> i) & 1 ? -1.0 : 1.0;
      const double* col = ptrs[i];
      for (std::int64_t r = 0; r < N; ++r) y[r] += s * col[r];
    }
    const double f = mixed_norm_flat(ctx.cols.cod, y.data(), bs.data());
    if (best.improves(f, sel, static_cast<std::int64_t>(mask)))
      best.take(f, sel, static_cast<std::int64_t>(mask), nullptr);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Sampling: per-block Laplace draws normalized to the unit sphere.

inline BlockVector sample_unit_vector(const SpaceSpec& spec, std::uint64_t seed,
                                      std::int64_t index) {
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(index)));
  for (int attempt = 0; attempt < 5; ++attempt) {
    BlockVector x(spec);
    for (std::int32_t i = 0; i < spec.block_count(); ++i)
      for (std::int32_t c = 0; c < spec.dim(i); ++c)
        x.block(i)[c] = rng.laplace();
    const double n = vec_norm(x);
    if (n > 0.0 && std::isfinite(n)) {
      for (std::int32_t i = 0; i < spec.block_count(); ++i)
        for (std::int32_t c = 0; c < spec.dim(i); ++c) x.block(i)[c] /= n;
      return x;
    }
  }
  return basis_vector(spec, 0, 0, +1);
}

// Rayleigh-style ratio: dividing by the witness's recomputed norm removes the
// residual rounding of the normalization, so an isometry scores exactly 1.
inline double sample_value(const BlockOperator& T, std::uint64_t seed,
                           std::int64_t index) {
  const BlockVector x = sample_unit_vector(T.domain(), seed, index);
  const double den = vec_norm(x);
  if (den == 0.0) return 0.0;
  return vec_norm(apply(T, x)) / den;
}

// ---------------------------------------------------------------------------
// Driver support shared by norms.cpp and norms_serial.cpp.

inline constexpr std::int64_t kSelectionLimit = 1000000;       // finite p
inline constexpr std::int64_t kLinfEvalLimit = 100000000;      // 2^m * prod n_i
inline constexpr std::int32_t kLinfBlockLimit = 24;

inline EnumContext make_enum_context(const BlockOperator& T,
                                     const SolverConfig& cfg) {
  const Exponent& p = T.domain().outer();
  if (p.is_inf() || p.is_one())
    throw DispatchError("extreme_enumeration handles p in (1, inf) only; got p=" +
                        p.str());
  EnumContext ctx;
  ctx.cols = extract_columns(T);
  ctx.m = T.domain().block_count();
  ctx.sel_count = selection_count(ctx.cols.dom_dims, kSelectionLimit);
  if (ctx.sel_count < 0)
    throw SizeLimitError("selection count exceeds " +
                         std::to_string(kSelectionLimit));
  ctx.p = p.value();
  ctx.pstar = p.dual().value();
  ctx.cfg = cfg;
  ctx.seeds = seeds_per_problem(cfg, ctx.m);
  return ctx;
}

inline LinfContext make_linf_context(const BlockOperator& T) {
  if (!T.domain().outer().is_inf())
    throw DispatchError("opnorm_linf_exact requires domain exponent inf; got p=" +
                        T.domain().outer().str());
  const std::int32_t m = T.domain().block_count();
  if (m > kLinfBlockLimit)
    throw SizeLimitError("sign enumeration limited to " +
                         std::to_string(kLinfBlockLimit) + " blocks; got " +
                         std::to_string(m));
  LinfContext ctx;
  ctx.cols = extract_columns(T);
  ctx.m = m;
  ctx.sel_count = selection_count(ctx.cols.dom_dims, kLinfEvalLimit);
  if (ctx.sel_count < 0 ||
      ctx.sel_count > (kLinfEvalLimit >> std::min(m, 62)))
    throw SizeLimitError("sign enumeration would exceed " +
                         std::to_string(kLinfEvalLimit) + " evaluations");
  return ctx;
}

// Witness with block i = t_i * e_{k_i} for the winning selection.
inline BlockVector selection_witness(const SpaceSpec& domain,
                                     std::span<const std::int32_t> dims,
                                     std::int64_t sel,
                                     std::span<const double> t) {
  std::vector<std::int32_t> ks(dims.size());
  decode_selection(sel, dims, ks.data());
  BlockVector x(domain);
  for (std::size_t i = 0; i < dims.size(); ++i)
    x.block(static_cast<std::int32_t>(i))[ks[i]] = t[i];
  return x;
}

// Witness with block i = sigma_i e_{k_i} for the winning sign mask.
inline BlockVector linf_witness(const SpaceSpec& domain,
                                std::span<const std::int32_t> dims,
                                std::int64_t sel, std::int64_t mask) {
  std::vector<std::int32_t> ks(dims.size());
  decode_selection(sel, dims, ks.data());
  BlockVector x(domain);
  for (std::size_t i = 0; i < dims.size(); ++i)
    x.block(static_cast<std::int32_t>(i))[ks[i]] =
        (mask >> i) & 1 ? -1.0 : 1.0;
  return x;
}

// Mandatory signed-basis sweep folded into a finished estimate. A basis value
// can exceed `upper` only by accumulated rounding; anything past the guard
// band is an internal inconsistency worth failing loudly on.
inline NormEstimate finalize_with_basis(const BlockOperator& T, double lower,
                                        double upper, BlockVector witness,
                                        NormMethod method) {
  const FlatColumns fc = extract_columns(T);
  const BasisBest bb = best_basis_column(fc);
  if (bb.value > lower) {
    lower = bb.value;
    witness = basis_vector(T.domain(), bb.block, bb.coord, +1);
  }
  if (lower > upper) {
    if (lower - upper > 1e-9 * std::max(1.0, lower))
      throw Error("internal: lower bound exceeds upper bound");
    upper = lower;
  }
  return NormEstimate{lower, upper, std::move(witness), method};
}

}  // namespace oplab::detail
