// Times the OpenMP drivers against the plain serial reference drivers on the
// three hot kernels (finite-p enumeration, sign enumeration, sampling) and
// checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <string>

#include "oplab/norms.hpp"
#include "oplab/parallel.hpp"
#include "oplab/verify.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
double time_call(F&& f) {
  const auto t0 = Clock::now();
  f();
  return seconds_since(t0);
}

void report(const char* name, double serial_s, double parallel_s, bool equal) {
  std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n",
              name, serial_s, parallel_s,
              parallel_s > 0 ? serial_s / parallel_s : 0.0,
              equal ? "results equal" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = 20240817;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  std::printf("threads: %d\n", oplab::par::effective_threads());
  bool all_equal = true;

  {
    oplab::SpaceSpec spec(oplab::Exponent::finite(2.0), {3, 3, 3, 3, 3});
    const oplab::BlockOperator T = oplab::gen_operator(spec, seed, 1.0);
    oplab::SolverConfig cfg;
    cfg.restarts = 8;
    cfg.max_iters = 2000;
    cfg.seed = seed;
    oplab::NormEstimate a{0, 0, oplab::BlockVector(spec), oplab::NormMethod::extreme_enum};
    oplab::NormEstimate b = a;
    const double ts = time_call([&] { a = oplab::serial::opnorm(T, cfg); });
    const double tp = time_call([&] { b = oplab::opnorm(T, cfg); });
    const bool eq = a.lower == b.lower && a.upper == b.upper &&
                    a.witness == b.witness;
    all_equal = all_equal && eq;
    report("extreme enumeration (p=2)", ts, tp, eq);
  }

  {
    oplab::SpaceSpec spec(oplab::Exponent::inf(),
                          std::vector<std::int32_t>(10, 2));
    const oplab::BlockOperator T = oplab::gen_operator(spec, seed + 1, 1.0);
    oplab::ExactNorm a{0, oplab::BlockVector(spec)};
    oplab::ExactNorm b = a;
    const double ts =
        time_call([&] { a = oplab::serial::opnorm_linf_exact(T); });
    const double tp = time_call([&] { b = oplab::opnorm_linf_exact(T); });
    const bool eq = a.value == b.value && a.witness == b.witness;
    all_equal = all_equal && eq;
    report("sign enumeration (p=inf)", ts, tp, eq);
  }

  {
    oplab::SpaceSpec spec(oplab::Exponent::finite(1.5),
                          {4, 4, 4, 4, 4, 4, 4, 4});
    const oplab::BlockOperator T = oplab::gen_operator(spec, seed + 2, 1.0);
    oplab::SamplingBound a{0, oplab::BlockVector(spec)};
    oplab::SamplingBound b = a;
    const double ts =
        time_call([&] { a = oplab::serial::sampling_oracle(T, 200000, seed); });
    const double tp =
        time_call([&] { b = oplab::sampling_oracle(T, 200000, seed); });
    const bool eq = a.lower == b.lower && a.witness == b.witness;
    all_equal = all_equal && eq;
    report("sampling oracle", ts, tp, eq);
  }

  if (!all_equal) {
    std::printf("FAIL: parallel drivers diverged from the serial reference\n");
    return 1;
  }
  return 0;
}
