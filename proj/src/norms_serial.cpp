#include <cmath>

#include "norms_kernels.hpp"
#include "oplab/norms.hpp"

// Serial reference drivers: textbook loops over the same per-index kernels
// the OpenMP drivers run. Kept deliberately plain so scheduling bugs in the
// parallel path have something simple to be measured against.

namespace oplab::serial {

ExactNorm opnorm_linf_exact(const BlockOperator& T) {
  const detail::LinfContext ctx = detail::make_linf_context(T);
  std::vector<std::int32_t> ks(ctx.m, 0);
  std::vector<const double*> ptrs(ctx.m, nullptr);
  std::vector<double> y(ctx.cols.cod.total(), 0.0);
  std::vector<double> bs(ctx.cols.cod.blocks(), 0.0);
  detail::Cand best;
  for (std::int64_t sel = 0; sel < ctx.sel_count; ++sel)
    best.merge(detail::linf_eval_selection(ctx, sel, ks, ptrs, y, bs));
  return {best.value,
          detail::linf_witness(T.domain(), ctx.cols.dom_dims, best.sel,
                               best.item)};
}

NormEstimate extreme_enumeration(const BlockOperator& T,
                                 const SolverConfig& cfg) {
  validate(cfg);
  const detail::EnumContext ctx = detail::make_enum_context(T, cfg);
  detail::EnumScratch scr;
  scr.resize(ctx);

  detail::Cand best;
  for (std::int64_t task = 0; task < ctx.task_count(); ++task)
    best.merge(detail::enum_run_task(ctx, task, scr));

  double upper = 0.0;
  for (std::int64_t sel = 0; sel < ctx.sel_count; ++sel) {
    const detail::SelUpper su = detail::enum_selection_upper(ctx, sel, scr);
    upper = std::max(upper, su.upper);
    best.merge(su.net_cand);
  }

  BlockVector witness = detail::selection_witness(
      T.domain(), ctx.cols.dom_dims, best.sel, best.t);
  return detail::finalize_with_basis(T, best.value, upper, std::move(witness),
                                     NormMethod::extreme_enum);
}

NormEstimate opnorm(const BlockOperator& T, const SolverConfig& cfg) {
  validate(cfg);
  const Exponent& p = T.domain().outer();
  if (p.is_one()) {
    ExactNorm e = oplab::opnorm_l1_exact(T);
    return detail::finalize_with_basis(T, e.value, e.value,
                                       std::move(e.witness),
                                       NormMethod::exact_l1);
  }
  if (p.is_inf()) {
    ExactNorm e = serial::opnorm_linf_exact(T);
    return detail::finalize_with_basis(T, e.value, e.value,
                                       std::move(e.witness),
                                       NormMethod::exact_linf);
  }
  return serial::extreme_enumeration(T, cfg);
}

SamplingBound sampling_oracle(const BlockOperator& T, std::int64_t samples,
                              std::uint64_t seed) {
  if (samples < 0) samples = 0;
  detail::Cand best;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double v = detail::sample_value(T, seed, i);
    if (best.improves(v, 0, i)) best.take(v, 0, i, nullptr);
  }
  const detail::FlatColumns fc = detail::extract_columns(T);
  const detail::BasisBest bb = detail::best_basis_column(fc);
  if (best.sel < 0 || bb.value > best.value)
    return {bb.value, basis_vector(T.domain(), bb.block, bb.coord, +1)};
  return {best.value, detail::sample_unit_vector(T.domain(), seed, best.item)};
}

}  // namespace oplab::serial
