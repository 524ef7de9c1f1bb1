#include "oplab/norms.hpp"

#include <cmath>

#include "norms_kernels.hpp"
#include "oplab/parallel.hpp"

namespace oplab {

std::string to_string(NormMethod m) {
  switch (m) {
    case NormMethod::exact_l1: return "exact-l1";
    case NormMethod::exact_linf: return "exact-linf";
    case NormMethod::extreme_enum: return "extreme-enum";
    case NormMethod::sampling: return "sampling";
  }
  return "unknown";
}

void validate(const SolverConfig& cfg) {
  if (cfg.restarts < 1) throw ConfigError("restarts must be >= 1");
  if (cfg.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol))
    throw ConfigError("tol must be a positive real");
  if (cfg.grid_resolution < 1)
    throw ConfigError("grid_resolution must be >= 1");
}

ExactNorm opnorm_l1_exact(const BlockOperator& T) {
  if (!T.domain().outer().is_one())
    throw DispatchError("opnorm_l1_exact requires domain exponent 1; got p=" +
                        T.domain().outer().str());
  const detail::FlatColumns fc = detail::extract_columns(T);
  const detail::BasisBest bb = detail::best_basis_column(fc);
  return {bb.value, basis_vector(T.domain(), bb.block, bb.coord, +1)};
}

ExactNorm opnorm_linf_exact(const BlockOperator& T) {
  const detail::LinfContext ctx = detail::make_linf_context(T);
  const int nt = par::effective_threads();
  struct Scratch {
    std::vector<std::int32_t> ks;
    std::vector<const double*> ptrs;
    std::vector<double> y, bs;
  };
  std::vector<Scratch> scr(nt);
  for (Scratch& s : scr) {
    s.ks.assign(ctx.m, 0);
    s.ptrs.assign(ctx.m, nullptr);
    s.y.assign(ctx.cols.cod.total(), 0.0);
    s.bs.assign(ctx.cols.cod.blocks(), 0.0);
  }
  std::vector<detail::Cand> partial(nt);
  par::parallel_for_tid(ctx.sel_count, [&](std::int64_t sel, int tid) {
    Scratch& s = scr[tid];
    partial[tid].merge(
        detail::linf_eval_selection(ctx, sel, s.ks, s.ptrs, s.y, s.bs));
  });
  detail::Cand best;
  for (const detail::Cand& c : partial) best.merge(c);
  return {best.value,
          detail::linf_witness(T.domain(), ctx.cols.dom_dims, best.sel,
                               best.item)};
}

NormEstimate extreme_enumeration(const BlockOperator& T,
                                 const SolverConfig& cfg) {
  validate(cfg);
  const detail::EnumContext ctx = detail::make_enum_context(T, cfg);
  const int nt = par::effective_threads();
  std::vector<detail::EnumScratch> scr(nt);
  for (detail::EnumScratch& s : scr) s.resize(ctx);

  std::vector<detail::Cand> partial(nt);
  par::parallel_for_tid(ctx.task_count(), [&](std::int64_t task, int tid) {
    partial[tid].merge(detail::enum_run_task(ctx, task, scr[tid]));
  });
  detail::Cand best;
  for (const detail::Cand& c : partial) best.merge(c);

  std::vector<double> upper_part(nt, 0.0);
  std::vector<detail::Cand> net_part(nt);
  par::parallel_for_tid(ctx.sel_count, [&](std::int64_t sel, int tid) {
    const detail::SelUpper su = detail::enum_selection_upper(ctx, sel, scr[tid]);
    upper_part[tid] = std::max(upper_part[tid], su.upper);
    net_part[tid].merge(su.net_cand);
  });
  double upper = 0.0;
  for (const double u : upper_part) upper = std::max(upper, u);
  for (const detail::Cand& c : net_part) best.merge(c);

  BlockVector witness = detail::selection_witness(
      T.domain(), ctx.cols.dom_dims, best.sel, best.t);
  return detail::finalize_with_basis(T, best.value, upper, std::move(witness),
                                     NormMethod::extreme_enum);
}

NormEstimate opnorm(const BlockOperator& T, const SolverConfig& cfg) {
  validate(cfg);
  const Exponent& p = T.domain().outer();
  if (p.is_one()) {
    ExactNorm e = opnorm_l1_exact(T);
    return detail::finalize_with_basis(T, e.value, e.value,
                                       std::move(e.witness),
                                       NormMethod::exact_l1);
  }
  if (p.is_inf()) {
    ExactNorm e = opnorm_linf_exact(T);
    return detail::finalize_with_basis(T, e.value, e.value,
                                       std::move(e.witness),
                                       NormMethod::exact_linf);
  }
  return extreme_enumeration(T, cfg);
}

InnerMaxResult inner_max_lp(const SpaceSpec& codomain,
                            const std::vector<BlockVector>& columns,
                            const Exponent& p, const SolverConfig& cfg) {
  validate(cfg);
  if (p.is_inf() || p.is_one())
    throw DispatchError("inner_max_lp handles p in (1, inf) only; got p=" +
                        p.str());
  if (columns.empty())
    throw ShapeError("inner_max_lp: needs at least one column");
  for (const BlockVector& c : columns)
    if (c.spec() != codomain)
      throw ShapeError("inner_max_lp: column spec does not match codomain");

  const detail::FlatLayout cod = detail::make_layout(codomain);
  const std::int32_t m = static_cast<std::int32_t>(columns.size());
  const std::int64_t N = cod.total();
  std::vector<double> flat(static_cast<std::size_t>(N) * m);
  std::vector<const double*> ptrs(m);
  for (std::int32_t k = 0; k < m; ++k) {
    double* dst = flat.data() + static_cast<std::size_t>(k) * N;
    for (std::int32_t i = 0; i < codomain.block_count(); ++i)
      for (std::int32_t c = 0; c < codomain.dim(i); ++c)
        dst[cod.offset[i] + c] = columns[k].block(i)[c];
    ptrs[k] = dst;
  }
  detail::InnerProblem P;
  detail::build_inner(P, cod, {ptrs.data(), ptrs.size()});

  const double pv = p.value();
  const double ps = p.dual().value();
  const std::uint64_t problem_seed = mix_seed(cfg.seed, 0);
  const std::int32_t seeds = detail::seeds_per_problem(cfg, m);

  const int nt = par::effective_threads();
  std::vector<detail::AscentScratch> scr(nt);
  for (detail::AscentScratch& s : scr) s.resize(m, cod);
  std::vector<detail::Cand> partial(nt);
  par::parallel_for_tid(seeds, [&](std::int64_t idx, int tid) {
    const detail::SeedOutcome r =
        detail::run_seed(P, pv, ps, cfg, problem_seed,
                         static_cast<std::int32_t>(idx), scr[tid]);
    std::vector<double> t(r.t);
    for (std::int32_t k = 0; k < m; ++k) t[k] *= P.col_sign[k];
    detail::Cand c;
    c.take(r.value, 0, idx, &t);
    partial[tid].merge(c);
  });
  detail::Cand best;
  for (const detail::Cand& c : partial) best.merge(c);

  double upper = detail::holder_upper(P, pv);
  if (cfg.grid_cert && m <= 3) {
    const detail::GridCertOut g = detail::grid_certificate(
        P, pv, upper, cfg.grid_resolution, scr[0]);
    upper = std::min(upper, g.upper);
    std::vector<double> t(g.net_t);
    for (std::int32_t k = 0; k < m; ++k) t[k] *= P.col_sign[k];
    detail::Cand c;
    c.take(g.net_best, 0, seeds, &t);
    best.merge(c);
  }
  if (best.value > upper) {
    if (best.value - upper > 1e-9 * std::max(1.0, best.value))
      throw Error("internal: lower bound exceeds upper bound");
    upper = best.value;
  }
  return {best.value, best.t, upper};
}

SamplingBound sampling_oracle(const BlockOperator& T, std::int64_t samples,
                              std::uint64_t seed) {
  if (samples < 0) samples = 0;
  const int nt = par::effective_threads();
  std::vector<detail::Cand> partial(nt);
  par::parallel_for_tid(samples, [&](std::int64_t i, int tid) {
    const double v = detail::sample_value(T, seed, i);
    if (partial[tid].improves(v, 0, i)) partial[tid].take(v, 0, i, nullptr);
  });
  detail::Cand best;
  for (const detail::Cand& c : partial) best.merge(c);

  const detail::FlatColumns fc = detail::extract_columns(T);
  const detail::BasisBest bb = detail::best_basis_column(fc);
  if (best.sel < 0 || bb.value > best.value)
    return {bb.value, basis_vector(T.domain(), bb.block, bb.coord, +1)};
  return {best.value, detail::sample_unit_vector(T.domain(), seed, best.item)};
}

}  // namespace oplab
