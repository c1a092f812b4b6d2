#include "mulspace/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace mulspace {

namespace {

struct SampleTable {
  int dim;
  double extent;
  int n;  // samples per axis
  std::vector<cplx> values;

  double step() const { return 2.0 * extent / (n - 1); }

  cplx at(int i0, int i1) const {
    return values[static_cast<std::size_t>(i0) * (dim == 2 ? n : 1) + (dim == 2 ? i1 : 0)];
  }

  cplx interpolate(const Point& p) const {
    for (int a = 0; a < dim; ++a)
      if (std::fabs(p[a]) > extent * (1.0 + 1e-12))
        throw validation_error("symbol",
                               "sampled symbol queried outside its tabulated box");
    double h = step();
    auto locate = [&](double x, int& i, double& t) {
      double u = (std::clamp(x, -extent, extent) + extent) / h;
      i = std::min(static_cast<int>(u), n - 2);
      t = u - i;
    };
    int i0, i1 = 0;
    double t0, t1 = 0.0;
    locate(p[0], i0, t0);
    if (dim == 2) locate(p[1], i1, t1);
    if (dim == 1) return (1.0 - t0) * at(i0, 0) + t0 * at(i0 + 1, 0);
    return (1.0 - t0) * (1.0 - t1) * at(i0, i1) + t0 * (1.0 - t1) * at(i0 + 1, i1) +
           (1.0 - t0) * t1 * at(i0, i1 + 1) + t0 * t1 * at(i0 + 1, i1 + 1);
  }
};

}  // namespace

Symbol make_sampled_symbol(std::string label, int dim, double extent,
                           int samples_per_axis, std::vector<cplx> samples) {
  if (dim != 1 && dim != 2) throw validation_error("dim", "dim must be 1 or 2");
  if (samples_per_axis < 2)
    throw validation_error("samples_per_axis", "need at least two samples per axis");
  if (!(extent > 0.0)) throw validation_error("extent", "extent must be positive");
  std::size_t expect = static_cast<std::size_t>(samples_per_axis);
  if (dim == 2) expect *= samples_per_axis;
  if (samples.size() != expect)
    throw validation_error("samples", "sample count does not match the box");
  auto table = std::make_shared<SampleTable>(
      SampleTable{dim, extent, samples_per_axis, std::move(samples)});
  Symbol s;
  s.label = std::move(label);
  s.eval = [table](const Point& p) { return table->interpolate(p); };
  return s;
}

Symbol resample_symbol(const Symbol& m, int dim, double extent, int samples_per_axis) {
  std::vector<cplx> vals;
  std::size_t total = static_cast<std::size_t>(samples_per_axis);
  if (dim == 2) total *= samples_per_axis;
  vals.reserve(total);
  double h = 2.0 * extent / (samples_per_axis - 1);
  for (int i0 = 0; i0 < samples_per_axis; ++i0) {
    if (dim == 1) {
      vals.push_back(m({-extent + i0 * h, 0.0}));
    } else {
      for (int i1 = 0; i1 < samples_per_axis; ++i1)
        vals.push_back(m({-extent + i0 * h, -extent + i1 * h}));
    }
  }
  return make_sampled_symbol(m.label + ":sampled", dim, extent, samples_per_axis,
                             std::move(vals));
}

}  // namespace mulspace
