#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mulspace/fixtures.hpp"
#include "mulspace/grid.hpp"
#include "mulspace/multiplier.hpp"
#include "mulspace/norms.hpp"
#include "mulspace/partitions.hpp"
#include "mulspace/symbol.hpp"

namespace mulspace {

/// One measured two-sided constant: lhs and rhs norms per input, their ratio,
/// and the spread max/min across the batch.  The spread is the empirical
/// product of the two one-sided equivalence constants.
struct RatioEntry {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct RatioReport {
  std::string mode;
  std::string lhs_label;
  std::string rhs_label;
  std::vector<RatioEntry> per_input;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double ratio_spread = 0.0;  // ratio_max / ratio_min, >= 1 by construction
  std::vector<std::string> warnings;
};

struct EquivalenceParams {
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;
};

/// Ensemble-driven comparisons.
///   prop32      modulation M^{p,q}_s against the Bessel-weighted FL^q norm
///               (band-limited inputs only)
///   embed110    FL^1 against M^{2,1}_0
///   toft_chain  two reports: B^{2,1}_{n/2} against M^{2,1}_0, then
///               M^{2,1}_0 against B^{2,1}_0
std::vector<RatioReport> equivalence_ratio(const std::string& mode, const EnsembleSpec& spec,
                                           const Grid& grid, const EquivalenceParams& params,
                                           const DyadicPartition& dyadic,
                                           const UniformPartition& uniform);

/// Piece-driven comparisons over j in j_range, one entry per j.
///   herz16   Herz K^{1,1}_s of the transformed piece against M^{2,1}_s
///   pnorm17  M^{p,1}_s against M^{2,1}_s
std::vector<RatioReport> equivalence_ratio(const std::string& mode, const Symbol& m,
                                           JRange j_range, const Grid& reference,
                                           const EquivalenceParams& params,
                                           const DyadicPartition& dyadic,
                                           const UniformPartition& uniform);

/// Largest singular value of f -> m(D)f on L² of the grid, by power iteration
/// on the self-adjoint composition m*(D)m(D) from a seeded random start.  The
/// Rayleigh quotient converges like 1/k when |m| peaks smoothly inside the
/// node set, so the estimate extrapolates the k and k/2 quotients; clean
/// spectral gaps short-circuit to the plain quotient.
double operator_norm_l2(const Symbol& m, const Grid& grid, int iterations,
                        std::uint64_t seed = 0x5eed);

/// Hardy-norm transfer across an atom ensemble: per atom a, compares
/// hardy(riesz method) of m(D)a against that of a itself.
RatioReport atom_transfer_ratio(const Symbol& m, const EnsembleSpec& spec, const Grid& grid);

}  // namespace mulspace
