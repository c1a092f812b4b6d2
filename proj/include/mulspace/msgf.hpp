#pragma once

#include <string>

#include "mulspace/grid.hpp"

namespace mulspace {

/// Binary container for one grid function (.msgf).  Little-endian layout:
///
///   offset  size  field
///   0       4     magic "MSGF"
///   4       1     format version (1)
///   5       1     dim (1 or 2)
///   6       1     side (0 = space, 1 = frequency)
///   7       1     reserved (0)
///   8       4     u32 points per axis
///   12      4     u32 reserved (0)
///   16      8     f64 half width L
///   24      8     f64 reserved (0.0)
///   32      ...   N^dim complex samples as (re, im) f64 pairs,
///                 row-major in natural node order (axis 0 slow)
void write_msgf(const std::string& path, const GridFunction& f);
GridFunction read_msgf(const std::string& path);

}  // namespace mulspace
