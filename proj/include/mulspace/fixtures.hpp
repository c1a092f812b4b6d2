#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mulspace/grid.hpp"
#include "mulspace/symbol.hpp"

namespace mulspace {

/// Named symbols used across the experiments:
///   one                constant 1
///   riesz [axis]       -i xi_axis / |xi|, 0 at the origin; axis is 1-based
///                      (0 is accepted as an alias for the first axis)
///   mihlin_poly [b]    (1 + |xi|^2)^{-b/2}
///   oscillatory [a]    chi(|xi|) e^{i |xi|} (1 + |xi|^2)^{-a/2} with a smooth
///                      radial cutoff chi vanishing for |xi| <= 1/2 and equal
///                      to 1 for |xi| >= 1
/// one, riesz and mihlin_poly carry closed-form derivatives.
Symbol symbol_catalog(const std::string& name, const std::vector<double>& params = {});

struct BandSpec {
  double r_lo = 0.0;
  double r_hi = 4.0;
  bool linf = false;  // measure the radius in l-infinity instead of Euclidean
};

enum class EnsembleKind { band_limited, h1_atom, gaussian_mix };

/// Randomized input families.  All draws are addressed through the
/// counter-based generator, so the same (kind, count, seed) on the same grid
/// reproduces bitwise; band-limited coefficients are keyed by the integer
/// frequency index, so refining the grid at fixed half width extends the same
/// continuum function.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::band_limited;
  int count = 10;
  std::uint64_t seed = 0;
  BandSpec band;
  double atom_scale = 1.0;  // cube side; the actual side varies by 2^{+-1/2}
};

std::vector<GridFunction> make_ensemble(const EnsembleSpec& spec, const Grid& grid);

EnsembleKind parse_ensemble_kind(const std::string& name);
const char* ensemble_kind_name(EnsembleKind kind);

}  // namespace mulspace
