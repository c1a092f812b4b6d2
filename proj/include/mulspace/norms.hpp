#pragma once

#include <string>
#include <vector>

#include "mulspace/grid.hpp"
#include "mulspace/partitions.hpp"

namespace mulspace {

/// Norm value plus diagnostics.  `truncation_mass` is the relative squared-l2
/// spectral mass that sits past the region the discretization resolves
/// cleanly (the meaning per family is documented at each operation); a
/// warning string is appended when it exceeds 1e-8.  Warnings never affect
/// the value.
struct NormResult {
  double value = 0.0;
  double truncation_mass = 0.0;
  std::vector<std::string> warnings;
};

/// Bessel-potential norm (2 pi)^{-n/2} || (1+|xi|^2)^{s/2} Ff ||_2.
NormResult sobolev_norm(const GridFunction& f, double s);

/// Dyadic-decomposition norm: l^q over j >= 0 of 2^{js} ||piece_j||_p where
/// piece_j is the inverse transform of (decomposition term j) * Ff.  Terms
/// run until the annuli leave the dual node box, which covers every node
/// exactly; truncation_mass reports spectral mass past the last annulus that
/// fits whole.
NormResult besov_norm(const GridFunction& f, double p, double q, double s,
                      const DyadicPartition& dyadic);

/// Lattice-decomposition norm: l^q over integer k of (1+|k|)^s ||u_k||_p with
/// u_k the inverse transform of phi(. - k) * Ff.  The lattice is truncated at
/// |k|_inf <= ceil(dual half width) + 1, which covers all nodes; cells whose
/// certified contribution bound falls below 1e-13 of the running value are
/// skipped (the bound comes from the window's l1 mass, so the skip is exact
/// to that tolerance and deterministic).
NormResult modulation_norm(const GridFunction& f, double p, double q, double s,
                           const UniformPartition& uniform);

/// Short-time transform window.
struct Window {
  GridFunction g;
  std::string label;
};

/// L2-normalized Gaussian window centered at the origin.
Window make_gaussian_window(const Grid& grid);

/// Mixed-norm of the windowed transform V_g f(x, xi) with inner L^p in x and
/// outer weighted L^q in xi.  x is sampled with the given stride (stride 0
/// picks the default: 1 in 1D, 4 per axis in 2D).  When stride > 1 the value
/// is re-estimated at double stride and a quadrature mismatch above 5% is a
/// validation error.
NormResult stft_modulation_norm(const GridFunction& f, double p, double q, double s,
                                const Window& window, int stride = 0);

/// Weighted annulus norm in the function's own variable: l^q over j >= 0 of
/// 2^{js} || (decomposition term j) * f ||_p, pointwise products only.
NormResult herz_norm(const GridFunction& f, double p, double q, double s,
                     const DyadicPartition& dyadic);

/// || Ff ||_q on the dual nodes.
NormResult flq_norm(const GridFunction& f, double q);

enum class HardyMethod { maximal, riesz };

/// Real-Hardy-space estimators.  `maximal` integrates the pointwise sup over
/// dyadic scales t = 2^l, |l| <= dyadic_levels, of the Gaussian mollification
/// at scale t (a lower approximation that is monotone in dyadic_levels);
/// `riesz` returns ||f||_1 plus the l1 norms of the Riesz transforms.
NormResult hardy_norm(const GridFunction& f, HardyMethod method, int dyadic_levels = 10);

enum class NormFamily { lp, sobolev, besov, modulation, modulation_stft, herz, flq, hardy1 };

/// Parameter bundle for the dispatcher; families ignore parameters they do
/// not use, but p, q must still lie in [1, inf].
struct NormSpec {
  NormFamily family = NormFamily::lp;
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;
  HardyMethod hardy_method = HardyMethod::riesz;
  int stft_stride = 0;
  int hardy_levels = 10;
};

NormResult compute_norm(const GridFunction& f, const NormSpec& spec,
                        const DyadicPartition& dyadic, const UniformPartition& uniform);

}  // namespace mulspace
