#pragma once

#include <cstdint>

#include "mulspace/common.hpp"

namespace mulspace {

/// Smooth step built from the exp(-1/t) profile: 0 for t <= 0, 1 for t >= 1,
/// C^infinity in between.  sharpness rescales the profile to exp(-sharpness/t),
/// steepening the transition around t = 1/2.
double smooth_step(double t, double sharpness = 1.0);

/// Radial dyadic partition of unity.  The cutoff rho equals 1 on r <= 1 and 0
/// on r >= 2; the annulus bump psi(r) = rho(r) - rho(2r) is supported in
/// [1/2, 2], and the scaled family psi(2^{-j} r) telescopes so that the sum
/// over j of psi(2^{-j} r) is exactly 1 for every r > 0.  The inhomogeneous
/// family used by the dyadic-decomposition norms takes rho itself as the
/// j = 0 term.
struct DyadicPartition {
  double transition_sharpness = 1.0;
  /// Certified lower bound of psi on the middle annulus [2^{-1/2}, 2^{1/2}],
  /// measured by dense radial sampling at construction.
  double lower_bound_c = 0.0;
  JRange j_range{-20, 20};

  double cutoff(double r) const;        // rho
  double annulus_bump(double r) const;  // psi
  double annulus_bump_scaled(int j, double r) const;  // psi(2^{-j} r)
  /// Term of the inhomogeneous family: rho for j = 0, psi(2^{-j} r) for j >= 1.
  double decomposition_term(int j, double r) const;
  /// Closed form of sum_{j=a}^{b} psi(2^{-j} r) via telescoping.
  double partial_sum(double r, JRange range) const;
};

/// Lattice partition of unity.  theta(t) = sigma(t) / sum_k sigma(t - k) with
/// sigma the exp(-1/(1-t^2)) bump on (-1,1); the tensor product phi over the
/// axes is nonnegative, supported in [-1,1]^dim, and its integer translates
/// sum to 1 everywhere.
struct UniformPartition {
  int dim = 1;
  int lattice_radius = 16;

  double theta(double t) const;
  double phi(const Point& p) const;
  /// sum over the integer lattice of phi(p - k); only the 3^dim neighbors of
  /// the rounded point can contribute.
  double translate_sum(const Point& p) const;
};

/// Builds the dyadic partition and certifies its lower bound; sharpness
/// outside the range where the bound stays above 1e-6 is rejected.  The safe
/// range is roughly [0.25, 16].
DyadicPartition build_dyadic_partition(double transition_sharpness = 1.0,
                                       JRange j_range = {-20, 20});

UniformPartition build_uniform_partition(int dim);

/// Max deviation of the telescoped sum from 1 over random radii drawn
/// log-uniformly from [2^{j_min}, 2^{j_max}].
double partition_defect(const DyadicPartition& part, int sample_count, std::uint64_t seed);

/// Max deviation of the translate sum from 1 over uniform samples of the box
/// [-(R-2), R-2]^dim with R the lattice radius.
double partition_defect(const UniformPartition& part, int sample_count, std::uint64_t seed);

}  // namespace mulspace
