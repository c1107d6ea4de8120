#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "mhdbl/errors.hpp"
#include "mhdbl/field.hpp"
#include "mhdbl/grid.hpp"
#include "mhdbl/state.hpp"

namespace mhdbl {

// Layout:
//   MHDBL1\n
//   Nx Ny Ymax ell delta t\n          (decimal, 17 significant digits)
//   u, f, v, g as (Ny+1)*Nx little-endian doubles each, row-major (x fastest)

struct SnapshotHeader {
  std::size_t nx = 0, ny = 0;
  double ymax = 0.0, ell = 0.0, delta = 0.0, t = 0.0;
};

namespace detail {

inline std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

inline void write_block(std::ostream& os, const Field& f) {
  for (double x : f.data()) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    bits = to_little(bits);
    os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
}

inline Field read_block(std::istream& is, std::size_t rows, std::size_t nx) {
  Field f(rows, nx);
  for (double& x : f.data()) {
    std::uint64_t bits = 0;
    if (!is.read(reinterpret_cast<char*>(&bits), sizeof bits))
      throw Error("snapshot truncated");
    bits = to_little(bits);
    std::memcpy(&x, &bits, sizeof bits);
  }
  return f;
}

}  // namespace detail

inline void write_snapshot(const std::string& path, const State& s, const Grid& grid) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  char line[256];
  std::snprintf(line, sizeof line, "MHDBL1\n%zu %zu %.17g %.17g %.17g %.17g\n", grid.nx(),
                grid.ny(), grid.ymax(), grid.ell(), grid.delta(), s.t);
  os << line;
  for (const Field* f : {&s.u, &s.f, &s.v, &s.g}) detail::write_block(os, *f);
  if (!os) throw Error("failed writing " + path);
}

/// Fields and header of a snapshot; envelope constants are not stored.
inline std::pair<SnapshotHeader, State> read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  std::string magic, meta;
  std::getline(is, magic);
  if (magic != "MHDBL1") throw Error(path + " is not an MHDBL1 snapshot");
  std::getline(is, meta);
  SnapshotHeader h;
  std::istringstream ms(meta);
  if (!(ms >> h.nx >> h.ny >> h.ymax >> h.ell >> h.delta >> h.t))
    throw Error("malformed snapshot header in " + path);
  State s;
  s.t = h.t;
  s.delta = h.delta;
  s.u = detail::read_block(is, h.ny + 1, h.nx);
  s.f = detail::read_block(is, h.ny + 1, h.nx);
  s.v = detail::read_block(is, h.ny + 1, h.nx);
  s.g = detail::read_block(is, h.ny + 1, h.nx);
  return {h, std::move(s)};
}

}  // namespace mhdbl
