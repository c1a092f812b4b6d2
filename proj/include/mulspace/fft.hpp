#pragma once

#include <vector>

#include "mulspace/common.hpp"

namespace mulspace::detail {

/// Unnormalized c2c DFT over a power-of-two grid, sum_m f_m e^{sign 2 pi i k.m/N}
/// per axis.  dim in {1,2}, row-major layout, in.size() == N^dim.
std::vector<cplx> raw_dft(int dim, int n, int sign, const std::vector<cplx>& in);

}  // namespace mulspace::detail
