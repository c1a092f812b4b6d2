#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "mulspace/grid.hpp"
#include "mulspace/norms.hpp"
#include "mulspace/partitions.hpp"
#include "mulspace/symbol.hpp"

namespace mulspace {

/// Grid used to hold the rescaled annulus pieces psi(.) m(2^j .).  The 1D
/// default resolves the unit annulus with 64 nodes per unit frequency; the 2D
/// default is kept smaller because the lattice-decomposition norms sweep a
/// two-dimensional cell lattice.
Grid piece_reference_grid(int dim);

/// One rescaled dyadic piece m_j(xi) = psi(xi) m(2^j xi), sampled exactly at
/// the frequency nodes (2^j xi is formed by exponent manipulation, so the
/// symbol is evaluated at exact binary rescalings; no grid interpolation).
struct SymbolPiece {
  int j = 0;
  std::string source;
  GridFunction values;  // frequency side, zero off the annulus support
};

SymbolPiece extract_piece(const Symbol& m, int j, const DyadicPartition& dyadic,
                          const Grid& reference);

/// Per-piece criteria table.  Columns, for each j:
///   sobolev     ||m_j||_{L^2_s}
///   besov_half  ||m_j||_{B^{2,1}_{n/2}}
///   modulation  ||m_j||_{M^{2,1}_s}
///   herz        ||Fm_j||_{K^{1,1}_s}
///   modulation_p ||m_j||_{M^{p,1}_s}
struct ConditionRow {
  int j = 0;
  double sobolev = 0.0;
  double besov_half = 0.0;
  double modulation = 0.0;
  double herz = 0.0;
  double modulation_p = 0.0;
};

struct ConditionReport {
  double s = 0.0;
  double p = 1.0;
  JRange j_range;
  std::vector<ConditionRow> per_j;
  ConditionRow sup;             // columnwise max over j (the j field is unused)
  std::array<int, 5> argmax_j;  // maximizing j per column, in declaration order
  std::vector<std::string> warnings;
};

ConditionReport condition_report(const Symbol& m, double s, double p, JRange j_range,
                                 const DyadicPartition& dyadic,
                                 const UniformPartition& uniform, const Grid& reference);

/// sup over annulus sample points of |xi|^{|alpha|} |d^alpha m(xi)| for all
/// |alpha| <= order (default [n/2] + 1).  Closed-form derivatives are used
/// when the symbol carries them; otherwise central differences at relative
/// step 1e-4 |xi| with one Richardson refinement.  `diverged` flags samples
/// whose refinement fails to settle.
struct MihlinResult {
  double value = 0.0;
  int order = 1;
  bool diverged = false;
};

MihlinResult mihlin_sup(const Symbol& m, int dim, int order = 0);

/// Inverse transform of m at the grid frequency nodes applied to f:
/// f -> F^{-1}[ m(xi) Ff ].
GridFunction apply_multiplier(const Symbol& m, const GridFunction& f);

/// Kernel-side diagnostics of the pieces K_j = F^{-1} m_j:
///   k_l1       ||K_j||_1
///   grad_k_l1  sum over axes of ||d_l K_j||_1 (spectral derivative)
///   tail(R)    integral of |K_j| over |x| > R, by masked summation
///   slope      least-squares slope of log tail(R) vs log R over the radii
///              with tail > 1e-14 (NaN when fewer than two radii qualify)
struct KernelRow {
  int j = 0;
  double k_l1 = 0.0;
  double grad_k_l1 = 0.0;
  std::vector<std::pair<double, double>> tail;  // (R, tail mass)
  double slope = 0.0;
};

struct HormanderEntry {
  Point y{};
  double direct = 0.0;  // integral over |x| > 2|y| of |K(x-y) - K(x)|
  double bound = 0.0;   // piecewise proof-side majorant, see hormander_integral
};

struct KernelDiagnostics {
  JRange j_range;
  std::vector<KernelRow> per_j;
  double max_slope = 0.0;  // slowest decay over j, ignoring NaN rows
  std::vector<HormanderEntry> shifts;
  double hormander_sup = 0.0;
  std::vector<std::string> warnings;
};

KernelDiagnostics kernel_diagnostics(const Symbol& m, JRange j_range,
                                     const DyadicPartition& dyadic, const Grid& reference,
                                     const std::vector<double>& radii,
                                     const std::vector<Point>& shift_samples = {});

/// Kernel-difference experiment.  K is the inverse transform of
/// m * (telescoped dyadic sum over j_range); for every sampled shift y (an
/// exact grid vector with 0 < |y| < L/8) the direct masked integral of
/// |K(x-y) - K(x)| over |x| > 2|y| is compared against the summed per-piece
/// majorant  sum_j min( 2^j |y| ||grad K_j||_1 , 2 tail_j(2^j |y|) ).
struct HormanderReport {
  std::vector<HormanderEntry> per_y;
  double sup_direct = 0.0;
  double sup_bound = 0.0;
};

HormanderReport hormander_integral(const Symbol& m, JRange j_range,
                                   const DyadicPartition& dyadic, const Grid& kernel_grid,
                                   const std::vector<Point>& y_samples);

/// Default shift set for the kernel experiments: h * 2^l along the first
/// axis, four dyadic levels that keep |y| < L/8.
std::vector<Point> default_shift_samples(const Grid& grid);

}  // namespace mulspace
