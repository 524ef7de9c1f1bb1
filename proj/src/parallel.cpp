#include "oplab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oplab::par {

int effective_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("OPLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = static_cast<int>(std::min(v, 1024L));
  }
  return std::max(1, n);
}

namespace {

void run_loop(std::int64_t n,
              const std::function<void(std::int64_t, int)>& body) {
  if (n <= 0) return;
  const int nt = effective_threads();
#ifdef _OPENMP
  if (nt > 1 && n > 1) {
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        body(i, omp_get_thread_num());
      } catch (...) {
#pragma omp critical(oplab_par_err)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#endif
  (void)nt;
  for (std::int64_t i = 0; i < n; ++i) body(i, 0);
}

}  // namespace

void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t)>& body) {
  run_loop(n, [&](std::int64_t i, int) { body(i); });
}

void parallel_for_tid(std::int64_t n,
                      const std::function<void(std::int64_t, int)>& body) {
  run_loop(n, body);
}

}  // namespace oplab::par
