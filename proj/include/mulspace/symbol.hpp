#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mulspace/common.hpp"
#include "mulspace/grid.hpp"

namespace mulspace {

/// Frequency multiplier m: R^n -> C.  The evaluator owns the behavior at
/// singular points (catalog symbols with a singularity at the origin return 0
/// there).  Symbols with closed-form derivatives expose them through `deriv`,
/// indexed by a multi-index (order per axis, total order <= 2); the
/// finite-difference fallback is used otherwise.
struct Symbol {
  std::string label;
  std::function<cplx(const Point&)> eval;
  std::function<cplx(const Point&, const std::array<int, 2>&)> deriv;  // optional
  bool has_derivatives = false;

  cplx operator()(const Point& p) const { return eval(p); }
};

/// Symbol backed by samples on a uniform box [-extent, extent]^dim with
/// multilinear interpolation between nodes.  Evaluation outside the sampled
/// box throws; sampled data is never extrapolated.
Symbol make_sampled_symbol(std::string label, int dim, double extent,
                           int samples_per_axis, std::vector<cplx> samples);

/// Convenience: tabulate an existing symbol onto a sample box.
Symbol resample_symbol(const Symbol& m, int dim, double extent, int samples_per_axis);

}  // namespace mulspace
