#include "mulspace/grid.hpp"

#include <algorithm>
#include <cmath>

#include "mulspace/fft.hpp"

namespace mulspace {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// The frequency nodes are centered, xi_k = k * dxi with k = i - N/2, while the
// raw DFT pairs index m with index k mod N.  Because x_m = -L + m h and
// xi_k = k pi/L, the continuous phase e^{-i xi_k x_m} equals
// (-1)^k e^{-2 pi i k m / N}, so moving between natural (centered) order and
// DFT order is an index rotation by N/2 per axis plus an alternating sign.
// With N >= 8 a power of two, N/2 is even and (-1)^k = (-1)^i.
void centered_to_dft(const Grid& g, const std::vector<cplx>& natural, std::vector<cplx>& dft) {
  int n = g.points_per_axis;
  dft.resize(natural.size());
  if (g.dim == 1) {
    for (int i = 0; i < n; ++i) {
      double sgn = (i & 1) ? -1.0 : 1.0;
      dft[(i + n / 2) % n] = sgn * natural[i];
    }
    return;
  }
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1) {
      double sgn = ((i0 + i1) & 1) ? -1.0 : 1.0;
      dft[g.flat((i0 + n / 2) % n, (i1 + n / 2) % n)] = sgn * natural[g.flat(i0, i1)];
    }
}

void dft_to_centered(const Grid& g, const std::vector<cplx>& dft, std::vector<cplx>& natural) {
  int n = g.points_per_axis;
  natural.resize(dft.size());
  if (g.dim == 1) {
    for (int i = 0; i < n; ++i) {
      double sgn = (i & 1) ? -1.0 : 1.0;
      natural[i] = sgn * dft[(i + n / 2) % n];
    }
    return;
  }
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1) {
      double sgn = ((i0 + i1) & 1) ? -1.0 : 1.0;
      natural[g.flat(i0, i1)] = sgn * dft[g.flat((i0 + n / 2) % n, (i1 + n / 2) % n)];
    }
}

GridFunction transform(const GridFunction& f, int sign, double weight) {
  GridFunction out;
  out.grid = f.grid;
  out.side = f.side == Side::space ? Side::frequency : Side::space;
  if (f.side == Side::space) {
    // Space nodes are index-aligned; the centered correction lands on output.
    auto d = detail::raw_dft(f.grid.dim, f.grid.points_per_axis, sign, f.samples);
    dft_to_centered(f.grid, d, out.samples);
  } else {
    std::vector<cplx> packed;
    centered_to_dft(f.grid, f.samples, packed);
    out.samples = detail::raw_dft(f.grid.dim, f.grid.points_per_axis, sign, packed);
  }
  for (auto& v : out.samples) v *= weight;
  return out;
}

}  // namespace

Grid make_grid(int dim, int points_per_axis, double half_width) {
  if (dim != 1 && dim != 2) throw validation_error("dim", "dim must be 1 or 2");
  if (!power_of_two(points_per_axis) || points_per_axis < 8)
    throw validation_error("points_per_axis", "points per axis must be a power of two >= 8");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw validation_error("half_width", "half width must be positive and finite");
  return Grid{dim, points_per_axis, half_width};
}

GridFunction make_zero(const Grid& grid, Side side) {
  return GridFunction{grid, side, std::vector<cplx>(grid.size())};
}

GridFunction fourier(const GridFunction& f) {
  return transform(f, -1, f.cell_weight());
}

GridFunction inverse_fourier(const GridFunction& F) {
  double w = F.cell_weight() / (F.grid.dim == 1 ? kTwoPi : kTwoPi * kTwoPi);
  return transform(F, +1, w);
}

GridFunction forward_transform(const GridFunction& f) {
  if (f.side != Side::space)
    throw validation_error("side", "forward transform expects a space-side function");
  return fourier(f);
}

GridFunction inverse_transform(const GridFunction& F) {
  if (F.side != Side::frequency)
    throw validation_error("side", "inverse transform expects a frequency-side function");
  return inverse_fourier(F);
}

double lp_norm(const GridFunction& f, double p) {
  if (!(p >= 1.0)) throw validation_error("p", "exponent must satisfy p >= 1");
  if (std::isinf(p)) return max_abs(f);
  double acc = 0.0;
  if (p == 1.0) {
    for (const auto& v : f.samples) acc += std::abs(v);
  } else if (p == 2.0) {
    for (const auto& v : f.samples) acc += std::norm(v);
  } else {
    for (const auto& v : f.samples) acc += std::pow(std::abs(v), p);
  }
  return std::pow(f.cell_weight() * acc, 1.0 / p);
}

double max_abs(const GridFunction& f) {
  double m = 0.0;
  for (const auto& v : f.samples) m = std::max(m, std::abs(v));
  return m;
}

double boundary_max_abs(const GridFunction& f) {
  int n = f.grid.points_per_axis;
  double m = 0.0;
  if (f.grid.dim == 1) {
    m = std::max(std::abs(f.samples[0]), std::abs(f.samples[n - 1]));
  } else {
    for (int i = 0; i < n; ++i) {
      m = std::max(m, std::abs(f.samples[f.grid.flat(0, i)]));
      m = std::max(m, std::abs(f.samples[f.grid.flat(n - 1, i)]));
      m = std::max(m, std::abs(f.samples[f.grid.flat(i, 0)]));
      m = std::max(m, std::abs(f.samples[f.grid.flat(i, n - 1)]));
    }
  }
  return m;
}

double mass_fraction_beyond(const GridFunction& f, double radius, bool linf) {
  double total = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    double m = std::norm(f.samples[i]);
    total += m;
    Point p = f.point(i);
    double r = linf ? radius_linf(p) : mulspace::radius(p);
    if (r > radius) outside += m;
  }
  return total > 0.0 ? outside / total : 0.0;
}

}  // namespace mulspace
