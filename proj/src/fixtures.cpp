#include "mulspace/fixtures.hpp"

#include <cmath>

#include "mulspace/partitions.hpp"
#include "mulspace/rng.hpp"

namespace mulspace {

namespace {

int check_axis(const std::vector<double>& params) {
  if (params.size() != 1)
    throw validation_error("params", "riesz takes exactly one parameter (axis)");
  double a = params[0];
  if (a == 0.0) return 0;  // alias for the first axis
  if (a != 1.0 && a != 2.0)
    throw validation_error("params", "riesz axis must be 1 or 2");
  return static_cast<int>(a) - 1;
}

Symbol make_one() {
  Symbol s;
  s.label = "one";
  s.eval = [](const Point&) { return cplx{1.0, 0.0}; };
  s.deriv = [](const Point&, const std::array<int, 2>& alpha) {
    return (alpha[0] == 0 && alpha[1] == 0) ? cplx{1.0, 0.0} : cplx{};
  };
  s.has_derivatives = true;
  return s;
}

Symbol make_riesz(int axis) {
  Symbol s;
  s.label = "riesz:" + std::to_string(axis + 1);
  s.eval = [axis](const Point& xi) {
    double r = radius(xi);
    if (r == 0.0) return cplx{};
    return cplx{0.0, -xi[axis] / r};
  };
  s.deriv = [axis](const Point& xi, const std::array<int, 2>& alpha) -> cplx {
    double r = radius(xi);
    if (r == 0.0) return cplx{};
    int total = alpha[0] + alpha[1];
    auto comp = [&](int a) { return xi[a]; };
    if (total == 0) return cplx{0.0, -comp(axis) / r};
    double r3 = r * r * r;
    if (total == 1) {
      int d = alpha[0] == 1 ? 0 : 1;
      double val = (d == axis ? 1.0 / r : 0.0) - comp(axis) * comp(d) / r3;
      return cplx{0.0, -val};
    }
    // d/dxi_e [ delta_{d,axis}/r - xi_axis xi_d / r^3 ]
    int d, e;
    if (alpha[0] == 2) {
      d = e = 0;
    } else if (alpha[1] == 2) {
      d = e = 1;
    } else {
      d = 0;
      e = 1;
    }
    double r5 = r3 * r * r;
    double val = -(d == axis ? 1.0 : 0.0) * comp(e) / r3 -
                 ((e == axis ? 1.0 : 0.0) * comp(d) + (d == e ? comp(axis) : 0.0)) / r3 +
                 3.0 * comp(axis) * comp(d) * comp(e) / r5;
    return cplx{0.0, -val};
  };
  s.has_derivatives = true;
  return s;
}

Symbol make_mihlin_poly(double b) {
  Symbol s;
  s.label = "mihlin_poly:" + std::to_string(b);
  s.eval = [b](const Point& xi) {
    double u = xi[0] * xi[0] + xi[1] * xi[1];
    return cplx{std::pow(1.0 + u, -0.5 * b), 0.0};
  };
  // m = g(u), u = |xi|^2, g(u) = (1+u)^{-b/2}:
  //   d_i m        = 2 xi_i g'
  //   d_i d_j m    = 4 xi_i xi_j g'' + 2 delta_ij g'
  s.deriv = [b](const Point& xi, const std::array<int, 2>& alpha) -> cplx {
    double u = xi[0] * xi[0] + xi[1] * xi[1];
    double g = std::pow(1.0 + u, -0.5 * b);
    double g1 = -0.5 * b * std::pow(1.0 + u, -0.5 * b - 1.0);
    double g2 = 0.25 * b * (b + 2.0) * std::pow(1.0 + u, -0.5 * b - 2.0);
    int total = alpha[0] + alpha[1];
    if (total == 0) return cplx{g, 0.0};
    if (total == 1) {
      int d = alpha[0] == 1 ? 0 : 1;
      return cplx{2.0 * xi[d] * g1, 0.0};
    }
    int d, e;
    if (alpha[0] == 2) {
      d = e = 0;
    } else if (alpha[1] == 2) {
      d = e = 1;
    } else {
      d = 0;
      e = 1;
    }
    return cplx{4.0 * xi[d] * xi[e] * g2 + (d == e ? 2.0 * g1 : 0.0), 0.0};
  };
  s.has_derivatives = true;
  return s;
}

Symbol make_oscillatory(double a) {
  Symbol s;
  s.label = "oscillatory:" + std::to_string(a);
  s.eval = [a](const Point& xi) {
    double r = radius(xi);
    double chi = smooth_step(2.0 * r - 1.0);
    if (chi == 0.0) return cplx{};
    double amp = chi * std::pow(1.0 + r * r, -0.5 * a);
    return amp * cplx{std::cos(r), std::sin(r)};
  };
  return s;
}

}  // namespace

Symbol symbol_catalog(const std::string& name, const std::vector<double>& params) {
  if (name == "one") {
    if (!params.empty()) throw validation_error("params", "one takes no parameters");
    return make_one();
  }
  if (name == "riesz") return make_riesz(check_axis(params));
  if (name == "mihlin_poly") {
    if (params.size() != 1)
      throw validation_error("params", "mihlin_poly takes exactly one parameter (decay b)");
    return make_mihlin_poly(params[0]);
  }
  if (name == "oscillatory") {
    if (params.size() != 1)
      throw validation_error("params", "oscillatory takes exactly one parameter (decay a)");
    if (params[0] < 0.0) throw validation_error("params", "oscillatory decay must be >= 0");
    return make_oscillatory(params[0]);
  }
  throw validation_error("symbol", "unknown symbol: " + name);
}

namespace {

// Stream tags keep the independent fields of one member independent.
constexpr std::uint64_t kStreamBand = 1;
constexpr std::uint64_t kStreamAtomShape = 2;
constexpr std::uint64_t kStreamAtomPlace = 3;
constexpr std::uint64_t kStreamMix = 4;

std::vector<GridFunction> band_limited_ensemble(const EnsembleSpec& spec, const Grid& grid) {
  if (spec.band.r_hi > grid.freq_half_width())
    throw validation_error("band", "band exceeds the frequency half width");
  if (!(spec.band.r_lo >= 0.0) || !(spec.band.r_hi > spec.band.r_lo))
    throw validation_error("band", "band must satisfy 0 <= r_lo < r_hi");
  std::vector<GridFunction> out;
  const int n = grid.points_per_axis;
  // Coefficients are keyed by the integer frequency index so a refinement at
  // fixed half width reproduces the same continuum function.
  constexpr std::uint64_t offset = 1u << 20;
  for (int member = 0; member < spec.count; ++member) {
    Philox rng(spec.seed, (static_cast<std::uint64_t>(member) << 8) | kStreamBand);
    GridFunction fh = make_zero(grid, Side::frequency);
    for (std::size_t i = 0; i < fh.samples.size(); ++i) {
      Point xi = grid.freq_point(i);
      double r = spec.band.linf ? radius_linf(xi) : radius(xi);
      if (r < spec.band.r_lo || r > spec.band.r_hi) continue;
      int i0, i1;
      grid.axes(i, i0, i1);
      std::uint64_t k0 = static_cast<std::uint64_t>(i0 - n / 2 + offset);
      std::uint64_t k1 =
          grid.dim == 2 ? static_cast<std::uint64_t>(i1 - n / 2 + offset) : 0;
      fh.samples[i] = rng.complex_gaussian((k0 << 21) | k1);
    }
    out.push_back(inverse_fourier(fh));
  }
  return out;
}

std::vector<GridFunction> atom_ensemble(const EnsembleSpec& spec, const Grid& grid) {
  const double L = grid.half_width;
  const double h = grid.spacing();
  if (!(spec.atom_scale > 0.0))
    throw validation_error("atom_scale", "atom scale must be positive");
  if (spec.atom_scale < 4.0 * h)
    throw validation_error("atom_scale", "atom scale below four grid cells");
  if (spec.atom_scale > L / 2.0)
    throw validation_error("atom_scale", "atom does not fit in the box");
  std::vector<GridFunction> out;
  for (int member = 0; member < spec.count; ++member) {
    // Shape and placement draws are independent of atom_scale, so ensembles at
    // different scales are dilations of one another.
    Philox shape(spec.seed, (static_cast<std::uint64_t>(member) << 8) | kStreamAtomShape);
    Philox place(spec.seed, (static_cast<std::uint64_t>(member) << 8) | kStreamAtomPlace);
    double side = spec.atom_scale * std::exp2(place.uniform_in(0, -0.5, 0.5));
    side = std::min(side, L / 2.0);
    Point corner{};
    for (int a = 0; a < grid.dim; ++a) {
      double c = place.uniform_in(1 + a, -L / 4.0, L / 4.0);
      corner[a] = h * std::floor(c / h);  // snap to the node lattice
    }
    GridFunction f = make_zero(grid, Side::space);
    std::vector<std::size_t> support;
    // Separable trig profile on the cube, vanishing at its faces.
    double a0[3], b0[3], a1[3], b1[3];
    for (int d = 0; d < 3; ++d) {
      a0[d] = shape.gaussian(4 * d, 0);
      b0[d] = shape.gaussian(4 * d, 1);
      a1[d] = shape.gaussian(4 * d + 1, 0);
      b1[d] = shape.gaussian(4 * d + 1, 1);
    }
    auto profile1 = [&](double u, const double* ca, const double* cb) {
      double v = 0.0;
      for (int d = 0; d < 3; ++d)
        v += ca[d] * std::sin(kPi * (d + 1) * u) + cb[d] * std::sin(kPi * (d + 2) * u) * u;
      return v;
    };
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
      Point x = grid.space_point(i);
      bool inside = true;
      double v = 1.0;
      for (int a = 0; a < grid.dim; ++a) {
        double u = (x[a] - corner[a]) / side;
        if (u < 0.0 || u >= 1.0) {
          inside = false;
          break;
        }
        v *= profile1(u, a == 0 ? a0 : a1, a == 0 ? b0 : b1);
      }
      if (!inside) continue;
      f.samples[i] = v;
      support.push_back(i);
    }
    // Exact zero mean on the support (two passes kill the rounding residue),
    // then sup-normalization to 1/|Q|.
    for (int pass = 0; pass < 2; ++pass) {
      cplx mean{};
      for (auto i : support) mean += f.samples[i];
      mean /= static_cast<double>(support.size());
      for (auto i : support) f.samples[i] -= mean;
    }
    double peak = 0.0;
    for (auto i : support) peak = std::max(peak, std::abs(f.samples[i]));
    double volume = std::pow(side, static_cast<double>(grid.dim));
    if (peak > 0.0) {
      double scale = 1.0 / (peak * volume);
      for (auto i : support) f.samples[i] *= scale;
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<GridFunction> gaussian_mix_ensemble(const EnsembleSpec& spec, const Grid& grid) {
  std::vector<GridFunction> out;
  const double L = grid.half_width;
  for (int member = 0; member < spec.count; ++member) {
    Philox rng(spec.seed, (static_cast<std::uint64_t>(member) << 8) | kStreamMix);
    GridFunction f = make_zero(grid, Side::space);
    for (int g = 0; g < 3; ++g) {
      Point c{rng.uniform_in(8 * g, -L / 4.0, L / 4.0, 0),
              grid.dim == 2 ? rng.uniform_in(8 * g, -L / 4.0, L / 4.0, 1) : 0.0};
      double width = rng.uniform_in(8 * g + 1, 1.0, 4.0);
      cplx amp = rng.complex_gaussian(8 * g + 2);
      double inv = 1.0 / (2.0 * width * width);
      for (std::size_t i = 0; i < f.samples.size(); ++i) {
        Point x = grid.space_point(i);
        double d2 = (x[0] - c[0]) * (x[0] - c[0]) + (x[1] - c[1]) * (x[1] - c[1]);
        f.samples[i] += amp * std::exp(-d2 * inv);
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

std::vector<GridFunction> make_ensemble(const EnsembleSpec& spec, const Grid& grid) {
  if (spec.count < 1) throw validation_error("count", "ensemble count must be >= 1");
  switch (spec.kind) {
    case EnsembleKind::band_limited:
      return band_limited_ensemble(spec, grid);
    case EnsembleKind::h1_atom:
      return atom_ensemble(spec, grid);
    case EnsembleKind::gaussian_mix:
      return gaussian_mix_ensemble(spec, grid);
  }
  throw validation_error("kind", "unknown ensemble kind");
}

EnsembleKind parse_ensemble_kind(const std::string& name) {
  if (name == "band_limited") return EnsembleKind::band_limited;
  if (name == "h1_atom") return EnsembleKind::h1_atom;
  if (name == "gaussian_mix") return EnsembleKind::gaussian_mix;
  throw validation_error("kind", "unknown ensemble kind: " + name);
}

const char* ensemble_kind_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::band_limited:
      return "band_limited";
    case EnsembleKind::h1_atom:
      return "h1_atom";
    case EnsembleKind::gaussian_mix:
      return "gaussian_mix";
  }
  return "?";
}

}  // namespace mulspace
