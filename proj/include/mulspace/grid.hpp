#pragma once

#include <cstddef>
#include <vector>

#include "mulspace/common.hpp"

namespace mulspace {

/// Uniform periodic grid on the box [-L, L)^n, n in {1,2}, with N samples per
/// axis (N a power of two, N >= 8).  The dual grid carries the frequency
/// nodes xi_k = k * pi/L for k in [-N/2, N/2), so spatial spacing h = 2L/N,
/// frequency spacing pi/L, and frequency half width Xi = pi*N/(2L) satisfy
/// h * (pi/L) * N = 2*pi.
struct Grid {
  int dim = 1;
  int points_per_axis = 0;
  double half_width = 0.0;

  double spacing() const { return 2.0 * half_width / points_per_axis; }
  double freq_spacing() const { return kPi / half_width; }
  double freq_half_width() const { return kPi * points_per_axis / (2.0 * half_width); }
  std::size_t size() const {
    std::size_t n = static_cast<std::size_t>(points_per_axis);
    return dim == 1 ? n : n * n;
  }

  double space_node(int i) const { return -half_width + i * spacing(); }
  double freq_node(int i) const { return (i - points_per_axis / 2) * freq_spacing(); }

  /// Row-major flattening; axis 0 is the slow index.
  std::size_t flat(int i0, int i1 = 0) const {
    return static_cast<std::size_t>(i0) * (dim == 2 ? points_per_axis : 1) + (dim == 2 ? i1 : 0);
  }
  void axes(std::size_t flat_index, int& i0, int& i1) const {
    if (dim == 1) {
      i0 = static_cast<int>(flat_index);
      i1 = 0;
    } else {
      i0 = static_cast<int>(flat_index / points_per_axis);
      i1 = static_cast<int>(flat_index % points_per_axis);
    }
  }
  Point space_point(std::size_t flat_index) const {
    int i0, i1;
    axes(flat_index, i0, i1);
    return {space_node(i0), dim == 2 ? space_node(i1) : 0.0};
  }
  Point freq_point(std::size_t flat_index) const {
    int i0, i1;
    axes(flat_index, i0, i1);
    return {freq_node(i0), dim == 2 ? freq_node(i1) : 0.0};
  }

  bool operator==(const Grid&) const = default;
};

Grid make_grid(int dim, int points_per_axis, double half_width);

/// Which variable the samples are indexed by.  Space-side functions live on
/// the x nodes, frequency-side ones (multiplier pieces, spectra) on the xi
/// nodes.  Fourier transforms swap the side.
enum class Side { space, frequency };

struct GridFunction {
  Grid grid;
  Side side = Side::space;
  std::vector<cplx> samples;

  /// Quadrature weight of one cell in the function's own variable.
  double cell_weight() const {
    double w = side == Side::space ? grid.spacing() : grid.freq_spacing();
    return grid.dim == 1 ? w : w * w;
  }
  Point point(std::size_t flat_index) const {
    return side == Side::space ? grid.space_point(flat_index) : grid.freq_point(flat_index);
  }
  /// Half width of the function's own box (L on the space side, Xi on the
  /// frequency side); the dual box has the other value.
  double own_half_width() const {
    return side == Side::space ? grid.half_width : grid.freq_half_width();
  }
  double dual_half_width() const {
    return side == Side::space ? grid.freq_half_width() : grid.half_width;
  }
};

GridFunction make_zero(const Grid& grid, Side side);

/// Fourier transform in the function's own variable, with the convention
/// Ff(xi) = integral e^{-i xi x} f(x) dx approximated by the weighted sum
/// over nodes.  The result lives on the dual node set.
GridFunction fourier(const GridFunction& f);

/// Inverse transform, (2 pi)^{-n} integral e^{+i x xi} F(xi) dxi.
GridFunction inverse_fourier(const GridFunction& F);

/// Side-checked wrappers: forward maps space -> frequency, inverse maps
/// frequency -> space.  Passing the wrong side is a validation error.
GridFunction forward_transform(const GridFunction& f);
GridFunction inverse_transform(const GridFunction& F);

/// (w^n * sum |f|^p)^{1/p} with the cell weight of the function's own side;
/// p = infinity gives the max of |f| over nodes.  Requires p >= 1.
double lp_norm(const GridFunction& f, double p);

double max_abs(const GridFunction& f);

/// Largest |f| on the outermost node layer (both ends of every axis).
double boundary_max_abs(const GridFunction& f);

/// Fraction of the squared l2 mass carried by nodes with |point| > radius
/// (Euclidean by default, l-infinity on request).  Zero for the zero function.
double mass_fraction_beyond(const GridFunction& f, double radius, bool linf = false);

}  // namespace mulspace
