#pragma once

#include <cstddef>

namespace mulspace::runtime {

/// Worker count used by parallel_for.  Defaults to 1; the CLI raises it from
/// --threads / MULSPACE_THREADS.  Results are bitwise independent of the
/// setting because every loop writes to preassigned slots and reductions run
/// in index order.
int thread_count();
void set_thread_count(int n);

namespace detail {
void parallel_for_impl(std::size_t n, void* ctx, void (*body)(void*, std::size_t));
}

template <typename F>
void parallel_for(std::size_t n, F&& body) {
  detail::parallel_for_impl(n, &body, [](void* ctx, std::size_t i) {
    (*static_cast<F*>(ctx))(i);
  });
}

}  // namespace mulspace::runtime
