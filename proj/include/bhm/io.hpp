// BHG1 grid-function files: one textual header line
//   BHG1 n=<n> h=<float> L=<int> nu=<float> count=<int>
// terminated by '\n', followed by count little-endian IEEE-754 doubles in
// row-major order.  Round trips are bit exact.

#pragma once

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bhm/grid.hpp"

namespace bhm {

static_assert(std::endian::native == std::endian::little,
              "BHG1 writer assumes a little-endian host");

inline void store_grid_function(const GridFunction& f, const std::string& path) {
  if (!f.all_finite())
    throw std::runtime_error("store_grid_function: non-finite values");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("store_grid_function: cannot open " + path);
  char header[160];
  std::snprintf(header, sizeof(header), "BHG1 n=%d h=%.17g L=%d nu=%.17g count=%lld\n",
                f.grid.dim, f.grid.h, f.grid.box_level, f.grid.nu,
                static_cast<long long>(f.values.size()));
  out << header;
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("store_grid_function: write failed");
}

inline GridFunction load_grid_function(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_grid_function: cannot open " + path);
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("load_grid_function: missing header");
  int n = 0, L = 0;
  double h = 0.0, nu = 0.0;
  long long count = -1;
  if (std::sscanf(header.c_str(), "BHG1 n=%d h=%lg L=%d nu=%lg count=%lld",
                  &n, &h, &L, &nu, &count) != 5)
    throw std::runtime_error("load_grid_function: malformed header: " + header);
  HalfSpaceGrid grid;
  try {
    grid = HalfSpaceGrid(n, h, L, nu);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("load_grid_function: bad header field: ") +
                             e.what());
  }
  if (count != grid.total_cells())
    throw std::runtime_error("load_grid_function: dimension mismatch (count=" +
                             std::to_string(count) + ", grid needs " +
                             std::to_string(grid.total_cells()) + ")");
  std::vector<double> values(static_cast<std::size_t>(count));
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != values.size() * sizeof(double))
    throw std::runtime_error("load_grid_function: short read");
  GridFunction f(grid, std::move(values));
  if (!f.all_finite())
    throw std::runtime_error("load_grid_function: non-finite values");
  return f;
}

inline std::string format_header(const GridFunction& f) {
  std::ostringstream os;
  os << "BHG1 n=" << f.grid.dim << " h=" << f.grid.h << " L=" << f.grid.box_level
     << " nu=" << f.grid.nu << " count=" << f.values.size();
  return os.str();
}

}  // namespace bhm
