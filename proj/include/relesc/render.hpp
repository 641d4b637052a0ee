#pragma once

// Grid renders of the truncated critical escape rate, as CSV and 8-bit PGM.

#include <string>
#include <vector>

#include "relesc/divisors.hpp"

namespace relesc {

struct Grid {
  int width = 0;
  int height = 0;
  std::vector<double> xs;      // column coordinates
  std::vector<double> ys;      // row coordinates, top row first
  std::vector<double> values;  // row-major
  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
};

/// steps points from lo to hi inclusive; a single step sits at the midpoint.
std::vector<double> grid_axis(double lo, double hi, int steps);

/// Delta(C_f) for z^d + c, c = x + iy, over [re0, re1] x [-im, im].
Grid render_unicritical(int d, double re0, double re1, double im, int steps, int iters, int threads);

/// Delta(C_f) at infinity for A X^d + (b1, b2) over [lo, hi]^2 with A from `f`.
Grid render_translation_plane(const MinCritMap& f, double lo, double hi, int steps, int iters, int threads);

/// Index of the grid cell nearest to (x, y).
std::pair<int, int> nearest_cell(const Grid& g, double x, double y);

/// 0 below 1e-3, otherwise log10-scaled from [1e-3, 10] onto [1, 255].
unsigned char gray_level(double value);
std::string to_pgm(const Grid& g);
std::string to_csv(const Grid& g);

}  // namespace relesc
