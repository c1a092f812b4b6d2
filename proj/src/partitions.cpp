#include "mulspace/partitions.hpp"

#include <algorithm>
#include <cmath>

#include "mulspace/rng.hpp"

namespace mulspace {

double smooth_step(double t, double sharpness) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // Logistic form of exp(-s/t) / (exp(-s/t) + exp(-s/(1-t))); the naive
  // quotient underflows to 0/0 once both exponents pass -745.
  double w = sharpness * (1.0 / t - 1.0 / (1.0 - t));
  return 1.0 / (1.0 + std::exp(w));
}

double DyadicPartition::cutoff(double r) const {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  return 1.0 - smooth_step(r - 1.0, transition_sharpness);
}

double DyadicPartition::annulus_bump(double r) const {
  if (r <= 0.5 || r >= 2.0) return 0.0;
  return cutoff(r) - cutoff(2.0 * r);
}

double DyadicPartition::annulus_bump_scaled(int j, double r) const {
  return annulus_bump(std::ldexp(r, -j));
}

double DyadicPartition::decomposition_term(int j, double r) const {
  return j == 0 ? cutoff(r) : annulus_bump_scaled(j, r);
}

double DyadicPartition::partial_sum(double r, JRange range) const {
  // sum_{j=a}^{b} [rho(2^{-j} r) - rho(2^{-(j-1)} r)] collapses to the two ends.
  return cutoff(std::ldexp(r, -range.hi)) - cutoff(std::ldexp(r, -(range.lo - 1)));
}

double UniformPartition::theta(double t) const {
  auto sigma = [](double u) {
    double w = 1.0 - u * u;
    return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
  };
  double num = sigma(t);
  if (num == 0.0) return 0.0;
  return num / (sigma(t - 1.0) + num + sigma(t + 1.0));
}

double UniformPartition::phi(const Point& p) const {
  double v = theta(p[0]);
  if (dim == 2) v *= theta(p[1]);
  return v;
}

double UniformPartition::translate_sum(const Point& p) const {
  double total = 0.0;
  int k0 = static_cast<int>(std::lround(p[0]));
  int k1 = dim == 2 ? static_cast<int>(std::lround(p[1])) : 0;
  for (int a = k0 - 1; a <= k0 + 1; ++a) {
    if (dim == 1) {
      total += theta(p[0] - a);
    } else {
      for (int b = k1 - 1; b <= k1 + 1; ++b)
        total += theta(p[0] - a) * theta(p[1] - b);
    }
  }
  return total;
}

DyadicPartition build_dyadic_partition(double transition_sharpness, JRange j_range) {
  if (!(transition_sharpness > 0.0) || !std::isfinite(transition_sharpness))
    throw validation_error("transition_sharpness", "sharpness must be positive and finite");
  if (j_range.lo > j_range.hi)
    throw validation_error("j_range", "empty dyadic index range");
  DyadicPartition part;
  part.transition_sharpness = transition_sharpness;
  part.j_range = j_range;
  double lo = std::exp2(-0.5), hi = std::exp2(0.5);
  double c = 1.0;
  const int probes = 4096;
  for (int i = 0; i <= probes; ++i) {
    double r = lo + (hi - lo) * i / probes;
    c = std::min(c, part.annulus_bump(r));
  }
  part.lower_bound_c = c;
  if (c <= 1e-6)
    throw validation_error("transition_sharpness",
                           "annulus bump drops below 1e-6 on the middle annulus");
  return part;
}

UniformPartition build_uniform_partition(int dim) {
  if (dim != 1 && dim != 2) throw validation_error("dim", "dim must be 1 or 2");
  return UniformPartition{dim, 16};
}

double partition_defect(const DyadicPartition& part, int sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw validation_error("sample_count", "need at least one sample");
  Philox rng(seed, 0x64796164u);  // stream tag for the dyadic family
  double worst = 0.0;
  for (int i = 0; i < sample_count; ++i) {
    double e = rng.uniform_in(i, part.j_range.lo, part.j_range.hi);
    double r = std::exp2(e);
    worst = std::max(worst, std::fabs(part.partial_sum(r, part.j_range) - 1.0));
  }
  return worst;
}

double partition_defect(const UniformPartition& part, int sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw validation_error("sample_count", "need at least one sample");
  Philox rng(seed, 0x756e6966u);  // stream tag for the lattice family
  double box = part.lattice_radius - 2.0;
  double worst = 0.0;
  for (int i = 0; i < sample_count; ++i) {
    Point p{rng.uniform_in(i, -box, box, 0), 0.0};
    if (part.dim == 2) p[1] = rng.uniform_in(i, -box, box, 1);
    worst = std::max(worst, std::fabs(part.translate_sum(p) - 1.0));
  }
  return worst;
}

}  // namespace mulspace
