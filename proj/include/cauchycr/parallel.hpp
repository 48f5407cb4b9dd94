#ifndef CAUCHYCR_PARALLEL_HPP
#define CAUCHYCR_PARALLEL_HPP

#include <cstddef>
#include <vector>

namespace cauchycr {

/// Execution policy for assembly and evaluation kernels. Serial is the
/// reference path; Parallel uses OpenMP. Both must produce bit-identical
/// results (canonicalized matrices, fixed-chunk reductions).
enum class Exec { Serial, Parallel };

namespace detail {
constexpr std::size_t kReductionChunks = 256;
}

/// Deterministic sum of body(i) over i in [0, n). The index range is split
/// into a fixed number of chunks; chunk partials are accumulated left to
/// right, then combined in chunk order. The result does not depend on the
/// thread count, so Serial and Parallel agree bitwise.
template <class Body>
double deterministic_sum(std::size_t n, Exec exec, Body&& body) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = n < detail::kReductionChunks ? n : detail::kReductionChunks;
  std::vector<double> partial(nchunks, 0.0);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
      const std::size_t lo = static_cast<std::size_t>(c) * n / nchunks;
      const std::size_t hi = (static_cast<std::size_t>(c) + 1) * n / nchunks;
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += body(i);
      partial[static_cast<std::size_t>(c)] = s;
    }
  } else {
    for (std::size_t c = 0; c < nchunks; ++c) {
      const std::size_t lo = c * n / nchunks;
      const std::size_t hi = (c + 1) * n / nchunks;
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += body(i);
      partial[c] = s;
    }
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

} // namespace cauchycr

#endif
