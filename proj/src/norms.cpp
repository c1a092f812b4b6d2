#include "mulspace/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mulspace {

namespace {

void check_exponent(const char* name, double v) {
  if (!(v >= 1.0)) throw validation_error(name, std::string(name) + " must satisfy >= 1");
}

/// l^q aggregation of nonnegative terms; q = infinity takes the max.
struct LqAccum {
  double q;
  double sum = 0.0;
  double peak = 0.0;
  explicit LqAccum(double q_) : q(q_) {}
  void add(double term) {
    if (term <= 0.0) return;
    if (std::isinf(q)) {
      peak = std::max(peak, term);
    } else if (q == 1.0) {
      sum += term;
    } else if (q == 2.0) {
      sum += term * term;
    } else {
      sum += std::pow(term, q);
    }
  }
  double value() const {
    if (std::isinf(q)) return peak;
    if (sum == 0.0) return 0.0;
    return q == 1.0 ? sum : std::pow(sum, 1.0 / q);
  }
};

void flag_truncation(NormResult& r, const char* what) {
  if (r.truncation_mass > 1e-8)
    r.warnings.push_back(std::string(what) + ": relative spectral mass " +
                         std::to_string(r.truncation_mass) + " beyond resolved region");
}

/// Index window of nodes with |node - center| <= 1 on one axis of the dual
/// grid (which carries centered nodes step * (i - N/2)).
void axis_window(const GridFunction& dual, double center, int& lo, int& hi) {
  int n = dual.grid.points_per_axis;
  double step = dual.side == Side::space ? dual.grid.spacing() : dual.grid.freq_spacing();
  lo = std::max(0, static_cast<int>(std::ceil((center - 1.0) / step)) + n / 2);
  hi = std::min(n - 1, static_cast<int>(std::floor((center + 1.0) / step)) + n / 2);
}

int dyadic_term_count(double max_radius) {
  // Terms 0..J with 2^J >= max node radius make the decomposition sum equal 1
  // at every node.
  int j = 0;
  while (std::exp2(j) < max_radius && j < 64) ++j;
  return j + 1;
}

}  // namespace

NormResult sobolev_norm(const GridFunction& f, double s) {
  auto fhat = fourier(f);
  double acc = 0.0;
  for (std::size_t i = 0; i < fhat.samples.size(); ++i) {
    Point xi = fhat.point(i);
    double w = std::pow(1.0 + xi[0] * xi[0] + xi[1] * xi[1], s);
    acc += w * std::norm(fhat.samples[i]);
  }
  NormResult r;
  int n = f.grid.dim;
  r.value = std::pow(kTwoPi, -0.5 * n) * std::sqrt(fhat.cell_weight() * acc);
  r.truncation_mass = mass_fraction_beyond(fhat, 0.5 * fhat.own_half_width());
  flag_truncation(r, "sobolev");
  return r;
}

NormResult besov_norm(const GridFunction& f, double p, double q, double s,
                      const DyadicPartition& dyadic) {
  check_exponent("p", p);
  check_exponent("q", q);
  auto fhat = fourier(f);
  double corner = fhat.own_half_width() * std::sqrt(static_cast<double>(f.grid.dim));
  int terms = dyadic_term_count(corner);
  LqAccum acc(q);
  NormResult r;
  for (int j = 0; j < terms; ++j) {
    auto piece = fhat;
    bool empty = true;
    for (std::size_t i = 0; i < piece.samples.size(); ++i) {
      double w = dyadic.decomposition_term(j, radius(piece.point(i)));
      piece.samples[i] *= w;
      if (w != 0.0 && piece.samples[i] != 0.0) empty = false;
    }
    if (empty) continue;
    acc.add(std::exp2(static_cast<double>(j) * s) * lp_norm(inverse_fourier(piece), p));
  }
  r.value = acc.value();
  // Mass past the last annulus wholly inside the dual box is only partially
  // resolved.
  double full = std::exp2(std::floor(std::log2(fhat.own_half_width())));
  r.truncation_mass = mass_fraction_beyond(fhat, full);
  flag_truncation(r, "besov");
  return r;
}

NormResult modulation_norm(const GridFunction& f, double p, double q, double s,
                           const UniformPartition& uniform) {
  check_exponent("p", p);
  check_exponent("q", q);
  if (uniform.dim != f.grid.dim)
    throw validation_error("uniform", "partition dimension does not match the grid");
  auto fhat = fourier(f);
  const int dim = f.grid.dim;
  const int n = f.grid.points_per_axis;
  auto dual_node = [&](int i) {
    return fhat.side == Side::space ? f.grid.space_node(i) : f.grid.freq_node(i);
  };
  const int lattice = static_cast<int>(std::ceil(fhat.own_half_width())) + 1;
  const double own_volume =
      std::pow(2.0 * f.own_half_width(), static_cast<double>(dim));
  const double inv_two_pi_n = std::pow(kTwoPi, -static_cast<double>(dim));
  const double cell_w = fhat.cell_weight();

  struct Cell {
    int k0, k1;
    double weight;  // (1+|k|)^s
    double bound;   // certified upper bound for weight * ||u_k||_p
    double l1;      // l1 mass of the window
  };
  std::vector<Cell> cells;
  std::vector<double> theta0(n), theta1(n);
  for (int k0 = -lattice; k0 <= lattice; ++k0) {
    int lo0, hi0;
    axis_window(fhat, static_cast<double>(k0), lo0, hi0);
    if (lo0 > hi0) continue;
    for (int i = lo0; i <= hi0; ++i) theta0[i] = uniform.theta(dual_node(i) - k0);
    int k_lo = dim == 2 ? -lattice : 0;
    int k_hi = dim == 2 ? lattice : 0;
    for (int k1 = k_lo; k1 <= k_hi; ++k1) {
      int lo1 = 0, hi1 = 0;
      if (dim == 2) {
        axis_window(fhat, static_cast<double>(k1), lo1, hi1);
        if (lo1 > hi1) continue;
        for (int i = lo1; i <= hi1; ++i) theta1[i] = uniform.theta(dual_node(i) - k1);
      }
      double l1 = 0.0;
      for (int i0 = lo0; i0 <= hi0; ++i0)
        for (int i1 = lo1; i1 <= hi1; ++i1) {
          double w = theta0[i0] * (dim == 2 ? theta1[i1] : 1.0);
          if (w != 0.0) l1 += w * std::abs(fhat.samples[f.grid.flat(i0, i1)]);
        }
      l1 *= cell_w;
      if (l1 == 0.0) continue;
      double sup_bound = inv_two_pi_n * l1;
      double lp_bound = std::isinf(p) ? sup_bound : sup_bound * std::pow(own_volume, 1.0 / p);
      double kw = std::pow(1.0 + std::hypot(static_cast<double>(k0),
                                            static_cast<double>(k1)),
                           s);
      cells.push_back({k0, k1, kw, kw * lp_bound, l1});
    }
  }

  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.k0 != b.k0) return a.k0 < b.k0;
    return a.k1 < b.k1;
  });
  std::vector<double> tail(cells.size() + 1, 0.0);
  for (std::size_t i = cells.size(); i > 0; --i) tail[i - 1] = tail[i] + cells[i - 1].bound;

  LqAccum acc(q);
  GridFunction window = make_zero(f.grid, fhat.side);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    // Remaining cells contribute at most their summed bounds (l^q <= l^1).
    if (tail[c] <= 1e-13 * acc.value()) break;
    const Cell& cell = cells[c];
    int lo0, hi0, lo1 = 0, hi1 = 0;
    axis_window(fhat, cell.k0, lo0, hi0);
    for (int i = lo0; i <= hi0; ++i) theta0[i] = uniform.theta(dual_node(i) - cell.k0);
    if (dim == 2) {
      axis_window(fhat, cell.k1, lo1, hi1);
      for (int i = lo1; i <= hi1; ++i) theta1[i] = uniform.theta(dual_node(i) - cell.k1);
    }
    std::fill(window.samples.begin(), window.samples.end(), cplx{});
    for (int i0 = lo0; i0 <= hi0; ++i0)
      for (int i1 = lo1; i1 <= hi1; ++i1) {
        std::size_t idx = f.grid.flat(i0, i1);
        double w = theta0[i0] * (dim == 2 ? theta1[i1] : 1.0);
        window.samples[idx] = w * fhat.samples[idx];
      }
    acc.add(cell.weight * lp_norm(inverse_fourier(window), p));
  }

  NormResult r;
  r.value = acc.value();
  r.truncation_mass = mass_fraction_beyond(fhat, fhat.own_half_width() - 1.0, true);
  flag_truncation(r, "modulation");
  return r;
}

Window make_gaussian_window(const Grid& grid) {
  Window w;
  w.label = "gaussian";
  w.g = make_zero(grid, Side::space);
  for (std::size_t i = 0; i < w.g.samples.size(); ++i) {
    Point x = grid.space_point(i);
    w.g.samples[i] = std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]));
  }
  double nrm = lp_norm(w.g, 2.0);
  for (auto& v : w.g.samples) v /= nrm;
  return w;
}

namespace {

double stft_value(const GridFunction& f, double p, double q, double s,
                  const Window& window, int stride) {
  const Grid& g = f.grid;
  const int n = g.points_per_axis;
  const int dim = g.dim;
  std::vector<double> inner(g.size(), 0.0);  // L^p accumulation per xi node
  const bool sup_p = std::isinf(p);
  GridFunction prod = make_zero(g, Side::space);

  auto accumulate_shift = [&](int m0, int m1) {
    // f(t) * conj(g(t - x_m)) with the window rotated by the node offset.
    for (int i0 = 0; i0 < n; ++i0) {
      int s0 = i0 - m0;
      s0 -= n * static_cast<int>(std::floor(static_cast<double>(s0) / n));
      if (dim == 1) {
        prod.samples[i0] = f.samples[i0] * std::conj(window.g.samples[s0]);
      } else {
        for (int i1 = 0; i1 < n; ++i1) {
          int s1 = i1 - m1;
          s1 -= n * static_cast<int>(std::floor(static_cast<double>(s1) / n));
          prod.samples[g.flat(i0, i1)] =
              f.samples[g.flat(i0, i1)] * std::conj(window.g.samples[g.flat(s0, s1)]);
        }
      }
    }
    auto v = fourier(prod);
    if (sup_p) {
      for (std::size_t i = 0; i < v.samples.size(); ++i)
        inner[i] = std::max(inner[i], std::abs(v.samples[i]));
    } else if (p == 2.0) {
      for (std::size_t i = 0; i < v.samples.size(); ++i) inner[i] += std::norm(v.samples[i]);
    } else {
      for (std::size_t i = 0; i < v.samples.size(); ++i)
        inner[i] += std::pow(std::abs(v.samples[i]), p);
    }
  };

  for (int m0 = 0; m0 < n; m0 += stride) {
    if (dim == 1) {
      accumulate_shift(m0, 0);
    } else {
      for (int m1 = 0; m1 < n; m1 += stride) accumulate_shift(m0, m1);
    }
  }

  double x_weight = std::pow(g.spacing() * stride, static_cast<double>(dim));
  LqAccum acc(q);
  double cell = std::pow(g.freq_spacing(), static_cast<double>(dim));
  for (std::size_t i = 0; i < inner.size(); ++i) {
    double a = sup_p ? inner[i] : std::pow(x_weight * inner[i], 1.0 / p);
    if (a == 0.0) continue;
    Point xi = g.freq_point(i);
    double wgt = std::pow(1.0 + xi[0] * xi[0] + xi[1] * xi[1], 0.5 * s);
    if (std::isinf(q)) {
      acc.add(wgt * a);
    } else {
      acc.add(std::pow(cell, 1.0 / q) * wgt * a);
    }
  }
  return acc.value();
}

}  // namespace

NormResult stft_modulation_norm(const GridFunction& f, double p, double q, double s,
                                const Window& window, int stride) {
  check_exponent("p", p);
  check_exponent("q", q);
  if (f.side != Side::space)
    throw validation_error("side", "windowed transform expects a space-side function");
  if (!(window.g.grid == f.grid))
    throw validation_error("window", "window grid does not match the input");
  if (stride == 0) stride = f.grid.dim == 1 ? 1 : 4;
  if (stride < 1 || f.grid.points_per_axis % stride != 0)
    throw validation_error("stride", "stride must divide the points per axis");

  NormResult r;
  r.value = stft_value(f, p, q, s, window, stride);
  if (stride > 1 && f.grid.points_per_axis % (2 * stride) == 0) {
    double coarse = stft_value(f, p, q, s, window, 2 * stride);
    double err = std::fabs(r.value - coarse) / std::max(r.value, 1e-300);
    if (err > 0.05)
      throw validation_error("stride", "x-sampling too coarse: quadrature estimate " +
                                           std::to_string(err));
  }
  auto fhat = fourier(f);
  r.truncation_mass = mass_fraction_beyond(fhat, fhat.own_half_width() - 1.0, true);
  flag_truncation(r, "stft");
  return r;
}

NormResult herz_norm(const GridFunction& f, double p, double q, double s,
                     const DyadicPartition& dyadic) {
  check_exponent("p", p);
  check_exponent("q", q);
  double corner = f.own_half_width() * std::sqrt(static_cast<double>(f.grid.dim));
  int terms = dyadic_term_count(corner);
  LqAccum acc(q);
  auto piece = f;
  for (int j = 0; j < terms; ++j) {
    bool empty = true;
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
      double w = dyadic.decomposition_term(j, radius(f.point(i)));
      piece.samples[i] = w * f.samples[i];
      if (piece.samples[i] != 0.0) empty = false;
    }
    if (empty) continue;
    acc.add(std::exp2(static_cast<double>(j) * s) * lp_norm(piece, p));
  }
  NormResult r;
  r.value = acc.value();
  double full = std::exp2(std::floor(std::log2(f.own_half_width())));
  r.truncation_mass = mass_fraction_beyond(f, full);
  flag_truncation(r, "herz");
  return r;
}

NormResult flq_norm(const GridFunction& f, double q) {
  check_exponent("q", q);
  auto fhat = fourier(f);
  NormResult r;
  r.value = lp_norm(fhat, q);
  r.truncation_mass = mass_fraction_beyond(fhat, 0.5 * fhat.own_half_width());
  flag_truncation(r, "flq");
  return r;
}

NormResult hardy_norm(const GridFunction& f, HardyMethod method, int dyadic_levels) {
  if (dyadic_levels < 0) throw validation_error("dyadic_levels", "levels must be >= 0");
  auto fhat = fourier(f);
  NormResult r;
  if (method == HardyMethod::riesz) {
    double total = lp_norm(f, 1.0);
    for (int axis = 0; axis < f.grid.dim; ++axis) {
      auto part = fhat;
      for (std::size_t i = 0; i < part.samples.size(); ++i) {
        Point xi = part.point(i);
        double rr = radius(xi);
        cplx mult = rr == 0.0 ? cplx{} : cplx{0.0, -xi[axis] / rr};
        part.samples[i] *= mult;
      }
      total += lp_norm(inverse_fourier(part), 1.0);
    }
    r.value = total;
  } else {
    std::vector<double> peak(f.grid.size(), 0.0);
    for (int l = -dyadic_levels; l <= dyadic_levels; ++l) {
      double t = std::exp2(l);
      auto part = fhat;
      for (std::size_t i = 0; i < part.samples.size(); ++i) {
        Point xi = part.point(i);
        double r2 = xi[0] * xi[0] + xi[1] * xi[1];
        part.samples[i] *= std::exp(-0.5 * t * t * r2);
      }
      auto u = inverse_fourier(part);
      for (std::size_t i = 0; i < u.samples.size(); ++i)
        peak[i] = std::max(peak[i], std::abs(u.samples[i]));
    }
    double w = f.cell_weight();
    r.value = w * std::accumulate(peak.begin(), peak.end(), 0.0);
  }
  r.truncation_mass = mass_fraction_beyond(fhat, 0.5 * fhat.own_half_width());
  flag_truncation(r, "hardy");
  return r;
}

NormResult compute_norm(const GridFunction& f, const NormSpec& spec,
                        const DyadicPartition& dyadic, const UniformPartition& uniform) {
  check_exponent("p", spec.p);
  check_exponent("q", spec.q);
  if (!std::isfinite(spec.s)) throw validation_error("s", "weight exponent must be finite");
  switch (spec.family) {
    case NormFamily::lp: {
      NormResult r;
      r.value = lp_norm(f, spec.p);
      return r;
    }
    case NormFamily::sobolev:
      return sobolev_norm(f, spec.s);
    case NormFamily::besov:
      return besov_norm(f, spec.p, spec.q, spec.s, dyadic);
    case NormFamily::modulation:
      return modulation_norm(f, spec.p, spec.q, spec.s, uniform);
    case NormFamily::modulation_stft: {
      auto w = make_gaussian_window(f.grid);
      return stft_modulation_norm(f, spec.p, spec.q, spec.s, w, spec.stft_stride);
    }
    case NormFamily::herz:
      return herz_norm(f, spec.p, spec.q, spec.s, dyadic);
    case NormFamily::flq:
      return flq_norm(f, spec.q);
    case NormFamily::hardy1:
      return hardy_norm(f, spec.hardy_method, spec.hardy_levels);
  }
  throw validation_error("family", "unknown norm family");
}

}  // namespace mulspace
