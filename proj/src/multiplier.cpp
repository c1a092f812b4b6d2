#include "mulspace/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mulspace {

namespace {

GridFunction spectral_derivative(const GridFunction& piece, int axis) {
  GridFunction g = piece;
  for (std::size_t idx = 0; idx < g.samples.size(); ++idx) {
    Point xi = g.grid.freq_point(idx);
    g.samples[idx] *= cplx(0.0, xi[static_cast<std::size_t>(axis)]);
  }
  return g;
}

double masked_tail(const GridFunction& k, double cut) {
  double sum = 0.0;
  for (std::size_t idx = 0; idx < k.samples.size(); ++idx) {
    if (radius(k.point(idx)) > cut) sum += std::abs(k.samples[idx]);
  }
  return sum * k.cell_weight();
}

double tail_slope(const std::vector<std::pair<double, double>>& tail) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (const auto& [r, mass] : tail) {
    if (mass < 1e-14) continue;  // below quadrature noise, would bias the fit
    double lx = std::log(r), ly = std::log(mass);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

struct PieceKernel {
  GridFunction kernel;  // F^{-1} m_j on the space nodes
  double grad_l1 = 0.0;
};

PieceKernel piece_kernel(const Symbol& m, int j, const DyadicPartition& dyadic,
                         const Grid& reference) {
  SymbolPiece piece = extract_piece(m, j, dyadic, reference);
  PieceKernel out{inverse_transform(piece.values), 0.0};
  for (int axis = 0; axis < reference.dim; ++axis) {
    out.grad_l1 += lp_norm(inverse_transform(spectral_derivative(piece.values, axis)), 1.0);
  }
  return out;
}

void check_j_range(JRange r) {
  if (r.lo > r.hi) throw validation_error("j_range", "j_range lower bound exceeds upper bound");
}

}  // namespace

Grid piece_reference_grid(int dim) {
  if (dim == 1) return make_grid(1, 4096, 64.0 * kPi);
  return make_grid(2, 128, 8.0 * kPi);
}

SymbolPiece extract_piece(const Symbol& m, int j, const DyadicPartition& dyadic,
                          const Grid& reference) {
  SymbolPiece piece{j, m.label, make_zero(reference, Side::frequency)};
  for (std::size_t idx = 0; idx < piece.values.samples.size(); ++idx) {
    Point xi = reference.freq_point(idx);
    double w = dyadic.annulus_bump(radius(xi));
    if (w == 0.0) continue;  // keep the symbol unevaluated off the annulus
    Point scaled{std::ldexp(xi[0], j), std::ldexp(xi[1], j)};
    piece.values.samples[idx] = w * m(scaled);
  }
  return piece;
}

ConditionReport condition_report(const Symbol& m, double s, double p, JRange j_range,
                                 const DyadicPartition& dyadic,
                                 const UniformPartition& uniform, const Grid& reference) {
  check_j_range(j_range);
  if (!(p >= 1.0)) throw validation_error("p", "exponent p must be >= 1");

  ConditionReport rep;
  rep.s = s;
  rep.p = p;
  rep.j_range = j_range;
  rep.argmax_j = {j_range.lo, j_range.lo, j_range.lo, j_range.lo, j_range.lo};
  const double half_dim = 0.5 * reference.dim;

  auto absorb = [&rep](int j, const char* column, const NormResult& r) {
    for (const auto& w : r.warnings) {
      rep.warnings.push_back("j=" + std::to_string(j) + " " + column + ": " + w);
    }
    return r.value;
  };

  for (int j = j_range.lo; j <= j_range.hi; ++j) {
    SymbolPiece piece = extract_piece(m, j, dyadic, reference);
    ConditionRow row;
    row.j = j;
    row.sobolev = absorb(j, "sobolev", sobolev_norm(piece.values, s));
    row.besov_half = absorb(j, "besov_half", besov_norm(piece.values, 2.0, 1.0, half_dim, dyadic));
    row.modulation = absorb(j, "modulation", modulation_norm(piece.values, 2.0, 1.0, s, uniform));
    row.herz = absorb(j, "herz", herz_norm(fourier(piece.values), 1.0, 1.0, s, dyadic));
    row.modulation_p = absorb(j, "modulation_p", modulation_norm(piece.values, p, 1.0, s, uniform));

    const double values[5] = {row.sobolev, row.besov_half, row.modulation, row.herz,
                              row.modulation_p};
    double* sup_slots[5] = {&rep.sup.sobolev, &rep.sup.besov_half, &rep.sup.modulation,
                            &rep.sup.herz, &rep.sup.modulation_p};
    for (int c = 0; c < 5; ++c) {
      if (values[c] > *sup_slots[c]) {
        *sup_slots[c] = values[c];
        rep.argmax_j[static_cast<std::size_t>(c)] = j;
      }
    }
    rep.per_j.push_back(row);
  }
  return rep;
}

namespace {

/// Central differences with one Richardson refinement.  `settled` reports
/// whether halving the step moved the estimate by less than 5%.
cplx fd_derivative(const Symbol& m, const Point& xi, const std::array<int, 2>& alpha, double step,
                   bool& settled) {
  auto at = [&m, &xi](double d0, double d1) { return m(Point{xi[0] + d0, xi[1] + d1}); };
  auto stencil = [&](double h) -> cplx {
    int a = alpha[0], b = alpha[1];
    if (a == 0 && b == 0) return at(0.0, 0.0);
    if (a == 1 && b == 0) return (at(h, 0.0) - at(-h, 0.0)) / (2.0 * h);
    if (a == 0 && b == 1) return (at(0.0, h) - at(0.0, -h)) / (2.0 * h);
    if (a == 2 && b == 0) return (at(h, 0.0) - 2.0 * at(0.0, 0.0) + at(-h, 0.0)) / (h * h);
    if (a == 0 && b == 2) return (at(0.0, h) - 2.0 * at(0.0, 0.0) + at(0.0, -h)) / (h * h);
    // a == 1 && b == 1
    return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
  };
  cplx coarse = stencil(step);
  cplx fine = stencil(0.5 * step);
  settled = std::abs(fine - coarse) <= 0.05 * (std::abs(fine) + 1e-9);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

MihlinResult mihlin_sup(const Symbol& m, int dim, int order) {
  if (dim != 1 && dim != 2) throw validation_error("dim", "dim must be 1 or 2");
  if (order == 0) order = dim / 2 + 1;
  if (order < 1 || order > 2) throw validation_error("order", "derivative order must be 1 or 2");

  // Multi-indices up to the requested total order.
  std::vector<std::array<int, 2>> alphas{{0, 0}};
  alphas.push_back({1, 0});
  if (dim == 2) alphas.push_back({0, 1});
  if (order >= 2) {
    alphas.push_back({2, 0});
    if (dim == 2) {
      alphas.push_back({1, 1});
      alphas.push_back({0, 2});
    }
  }

  // Log-spaced radii, 33 per octave across twelve octaves around 1.
  std::vector<double> radii;
  for (int k = 0; k <= 12 * 33; ++k) radii.push_back(std::exp2(-6.0 + k / 33.0));

  std::vector<Point> directions;
  if (dim == 1) {
    directions.push_back({1.0, 0.0});
    directions.push_back({-1.0, 0.0});
  } else {
    for (int t = 0; t < 16; ++t) {
      double a = kTwoPi * t / 16.0;
      directions.push_back({std::cos(a), std::sin(a)});
    }
  }

  MihlinResult result;
  result.order = order;
  for (double r : radii) {
    for (const Point& dir : directions) {
      Point xi{r * dir[0], r * dir[1]};
      for (const auto& alpha : alphas) {
        int total = alpha[0] + alpha[1];
        cplx d;
        if (m.has_derivatives) {
          d = m.deriv(xi, alpha);
        } else if (total == 0) {
          d = m(xi);
        } else {
          bool settled = true;
          d = fd_derivative(m, xi, alpha, 1e-4 * r, settled);
          if (!settled) result.diverged = true;
        }
        double weighted = std::pow(r, total) * std::abs(d);
        result.value = std::max(result.value, weighted);
      }
    }
  }
  return result;
}

GridFunction apply_multiplier(const Symbol& m, const GridFunction& f) {
  GridFunction spectrum = forward_transform(f);
  for (std::size_t idx = 0; idx < spectrum.samples.size(); ++idx) {
    spectrum.samples[idx] *= m(spectrum.grid.freq_point(idx));
  }
  return inverse_transform(spectrum);
}

KernelDiagnostics kernel_diagnostics(const Symbol& m, JRange j_range,
                                     const DyadicPartition& dyadic, const Grid& reference,
                                     const std::vector<double>& radii,
                                     const std::vector<Point>& shift_samples) {
  check_j_range(j_range);
  for (double r : radii) {
    if (!(r > 0.0) || r >= reference.half_width / 2.0) {
      throw validation_error("radii", "tail radii must lie in (0, L/2)");
    }
  }
  KernelDiagnostics diag;
  diag.j_range = j_range;
  diag.max_slope = std::numeric_limits<double>::quiet_NaN();

  bool boundary_warned = false;
  for (int j = j_range.lo; j <= j_range.hi; ++j) {
    PieceKernel pk = piece_kernel(m, j, dyadic, reference);
    KernelRow row;
    row.j = j;
    row.k_l1 = lp_norm(pk.kernel, 1.0);
    row.grad_k_l1 = pk.grad_l1;
    for (double r : radii) row.tail.emplace_back(r, masked_tail(pk.kernel, r));
    row.slope = tail_slope(row.tail);
    if (!std::isnan(row.slope)) {
      diag.max_slope = std::isnan(diag.max_slope) ? row.slope : std::max(diag.max_slope, row.slope);
    }
    if (!boundary_warned && boundary_max_abs(pk.kernel) > 1e-8 * max_abs(pk.kernel)) {
      diag.warnings.push_back("kernel does not decay into the box edge; tail masses may alias");
      boundary_warned = true;
    }
    diag.per_j.push_back(std::move(row));
  }

  if (!shift_samples.empty()) {
    HormanderReport rep = hormander_integral(m, j_range, dyadic, reference, shift_samples);
    diag.shifts = rep.per_y;
    diag.hormander_sup = rep.sup_direct;
  }
  return diag;
}

HormanderReport hormander_integral(const Symbol& m, JRange j_range,
                                   const DyadicPartition& dyadic, const Grid& kernel_grid,
                                   const std::vector<Point>& y_samples) {
  check_j_range(j_range);
  const double h = kernel_grid.spacing();
  const int n = kernel_grid.points_per_axis;

  std::vector<std::array<int, 2>> steps;
  for (const Point& y : y_samples) {
    std::array<int, 2> s{0, 0};
    for (int axis = 0; axis < 2; ++axis) {
      double ratio = y[static_cast<std::size_t>(axis)] / h;
      s[static_cast<std::size_t>(axis)] = static_cast<int>(std::llround(ratio));
      if (std::abs(ratio - s[static_cast<std::size_t>(axis)]) > 1e-9) {
        throw validation_error("y", "shift must be an exact grid vector");
      }
    }
    if (kernel_grid.dim == 1 && s[1] != 0) {
      throw validation_error("y", "shift has a second component on a 1D grid");
    }
    double r = radius(y);
    if (!(r > 0.0) || r >= kernel_grid.half_width / 8.0) {
      throw validation_error("y", "shift must satisfy 0 < |y| < L/8");
    }
    steps.push_back(s);
  }

  // Combined kernel of m restricted to the telescoped annulus range.
  GridFunction sum_symbol = make_zero(kernel_grid, Side::frequency);
  for (std::size_t idx = 0; idx < sum_symbol.samples.size(); ++idx) {
    Point xi = kernel_grid.freq_point(idx);
    double w = dyadic.partial_sum(radius(xi), j_range);
    if (w != 0.0) sum_symbol.samples[idx] = w * m(xi);
  }
  GridFunction kernel = inverse_transform(sum_symbol);

  std::vector<PieceKernel> pieces;
  for (int j = j_range.lo; j <= j_range.hi; ++j) {
    pieces.push_back(piece_kernel(m, j, dyadic, kernel_grid));
  }

  HormanderReport rep;
  for (std::size_t t = 0; t < y_samples.size(); ++t) {
    const double ynorm = radius(y_samples[t]);
    double direct = 0.0;
    for (std::size_t idx = 0; idx < kernel.samples.size(); ++idx) {
      if (radius(kernel_grid.space_point(idx)) <= 2.0 * ynorm) continue;
      int i0, i1;
      kernel_grid.axes(idx, i0, i1);
      int s0 = ((i0 - steps[t][0]) % n + n) % n;
      int s1 = kernel_grid.dim == 2 ? ((i1 - steps[t][1]) % n + n) % n : 0;
      direct += std::abs(kernel.samples[kernel_grid.flat(s0, s1)] - kernel.samples[idx]);
    }
    direct *= kernel.cell_weight();

    double bound = 0.0;
    for (std::size_t pj = 0; pj < pieces.size(); ++pj) {
      int j = j_range.lo + static_cast<int>(pj);
      double scaled = std::ldexp(ynorm, j);
      bound += std::min(scaled * pieces[pj].grad_l1, 2.0 * masked_tail(pieces[pj].kernel, scaled));
    }

    rep.per_y.push_back({y_samples[t], direct, bound});
    rep.sup_direct = std::max(rep.sup_direct, direct);
    rep.sup_bound = std::max(rep.sup_bound, bound);
  }
  return rep;
}

std::vector<Point> default_shift_samples(const Grid& grid) {
  int top = 0;
  while ((2 << top) < grid.points_per_axis / 16) ++top;  // largest l with 2^l < N/16
  std::vector<Point> shifts;
  for (int l = top; l >= 0; l -= 2) {
    double step = grid.spacing() * (1 << l);
    if (step < grid.half_width / 8.0) shifts.push_back({step, 0.0});
  }
  std::reverse(shifts.begin(), shifts.end());
  return shifts;
}

}  // namespace mulspace
