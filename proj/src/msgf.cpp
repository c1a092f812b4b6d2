#include "mulspace/msgf.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace mulspace {

static_assert(std::endian::native == std::endian::little,
              "msgf serialization assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {'M', 'S', 'G', 'F'};
constexpr std::uint8_t kVersion = 1;
}  // namespace

void write_msgf(const std::string& path, const GridFunction& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path);
  std::uint8_t head8[8] = {};
  std::memcpy(head8, kMagic, 4);
  head8[4] = kVersion;
  head8[5] = static_cast<std::uint8_t>(f.grid.dim);
  head8[6] = f.side == Side::space ? 0 : 1;
  out.write(reinterpret_cast<const char*>(head8), 8);
  std::uint32_t n = static_cast<std::uint32_t>(f.grid.points_per_axis);
  std::uint32_t reserved32 = 0;
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&reserved32), 4);
  double l = f.grid.half_width;
  double reserved64 = 0.0;
  out.write(reinterpret_cast<const char*>(&l), 8);
  out.write(reinterpret_cast<const char*>(&reserved64), 8);
  out.write(reinterpret_cast<const char*>(f.samples.data()),
            static_cast<std::streamsize>(f.samples.size() * sizeof(cplx)));
  if (!out) throw io_error("write failed: " + path);
}

GridFunction read_msgf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  std::uint8_t head8[8];
  std::uint32_t n, reserved32;
  double l, reserved64;
  in.read(reinterpret_cast<char*>(head8), 8);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&reserved32), 4);
  in.read(reinterpret_cast<char*>(&l), 8);
  in.read(reinterpret_cast<char*>(&reserved64), 8);
  if (!in) throw io_error("truncated header: " + path);
  if (std::memcmp(head8, kMagic, 4) != 0) throw io_error("bad magic: " + path);
  if (head8[4] != kVersion) throw io_error("unsupported format version: " + path);
  if (head8[6] > 1) throw io_error("bad side tag: " + path);
  GridFunction f;
  try {
    f.grid = make_grid(head8[5], static_cast<int>(n), l);
  } catch (const validation_error& e) {
    throw io_error(std::string("invalid grid header (") + e.what() + "): " + path);
  }
  f.side = head8[6] == 0 ? Side::space : Side::frequency;
  f.samples.resize(f.grid.size());
  in.read(reinterpret_cast<char*>(f.samples.data()),
          static_cast<std::streamsize>(f.samples.size() * sizeof(cplx)));
  if (!in) throw io_error("truncated samples: " + path);
  return f;
}

}  // namespace mulspace
