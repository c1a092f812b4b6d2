#include "mulspace/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

namespace mulspace::detail {

namespace {

// FFTW planning is not thread safe; execution through the new-array interface
// is.  Plans are created once per (dim, n, sign) with FFTW_ESTIMATE (so the
// result is independent of runtime measurements) and reused on scratch
// buffers allocated per call, which keeps concurrent transforms disjoint.
struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  fftw_plan get(int dim, int n, int sign) {
    std::scoped_lock lock(mu);
    auto key = std::make_tuple(dim, n, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::size_t total = dim == 1 ? n : static_cast<std::size_t>(n) * n;
    fftw_complex* buf = fftw_alloc_complex(total);
    fftw_complex* out = fftw_alloc_complex(total);
    fftw_plan p = dim == 1
                      ? fftw_plan_dft_1d(n, buf, out, sign, FFTW_ESTIMATE)
                      : fftw_plan_dft_2d(n, n, buf, out, sign, FFTW_ESTIMATE);
    fftw_free(buf);
    fftw_free(out);
    plans.emplace(key, p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

std::vector<cplx> raw_dft(int dim, int n, int sign, const std::vector<cplx>& in) {
  std::size_t total = in.size();
  fftw_plan plan = cache().get(dim, n, sign);
  fftw_complex* a = fftw_alloc_complex(total);
  fftw_complex* b = fftw_alloc_complex(total);
  std::memcpy(a, in.data(), total * sizeof(cplx));
  fftw_execute_dft(plan, a, b);
  std::vector<cplx> out(total);
  std::memcpy(out.data(), b, total * sizeof(cplx));
  fftw_free(a);
  fftw_free(b);
  return out;
}

}  // namespace mulspace::detail
