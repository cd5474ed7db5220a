#ifndef POLQEC_PARALLEL_HPP
#define POLQEC_PARALLEL_HPP

#include <cstddef>

namespace polqec {

/// How a Monte Carlo driver executes its trial loop.
enum class Execution {
  Serial,    // reference path: plain loop, one thread
  Parallel,  // OpenMP loop when compiled with OpenMP, serial otherwise
};

/// Runs body(i) for i in [0, n). Parallel execution requires that body(i)
/// touches only state owned by index i (the drivers write into preallocated
/// per-index slots and reduce serially afterwards, so results are identical
/// for both modes and any thread count).
template <typename Body>
void for_each_index(std::size_t n, Execution exec, const Body& body) {
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      body(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
  }
}

}  // namespace polqec

#endif  // POLQEC_PARALLEL_HPP
