#include "relesc/render.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "relesc/errors.hpp"
#include "relesc/unicritical.hpp"

namespace relesc {

std::vector<double> grid_axis(double lo, double hi, int steps) {
  if (steps < 1) throw UsageError("grid needs at least one step");
  if (!(lo <= hi)) throw UsageError("grid range is empty");
  std::vector<double> out(static_cast<std::size_t>(steps));
  if (steps == 1) {
    out[0] = (lo + hi) / 2;
    return out;
  }
  for (int i = 0; i < steps; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  return out;
}

namespace {

// Cells are independent and stored by index, so the bytes do not depend on
// the thread count.
template <class Fn>
void fill(Grid& g, int threads, Fn cell) {
  g.values.assign(static_cast<std::size_t>(g.width) * g.height, 0.0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex m;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= g.values.size()) return;
      try {
        g.values[i] = cell(g.ys[i / g.width], g.xs[i % g.width]);
      } catch (...) {
        std::lock_guard lock(m);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, threads); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Grid make_grid(double x0, double x1, double y0, double y1, int steps) {
  Grid g;
  g.width = g.height = steps;
  g.xs = grid_axis(x0, x1, steps);
  g.ys = grid_axis(y0, y1, steps);
  std::reverse(g.ys.begin(), g.ys.end());
  return g;
}

}  // namespace

Grid render_unicritical(int d, double re0, double re1, double im, int steps, int iters, int threads) {
  if (d < 2) throw UsageError("degree must be at least 2");
  if (iters < 1) throw UsageError("iterations must be positive");
  Grid g = make_grid(re0, re1, -std::abs(im), std::abs(im), steps);
  // Delta(C_f) = (d-1) Delta([0]) since f_*[0] = [c] and C_f = (d-1)[0]
  fill(g, threads, [&](double y, double x) { return (d - 1) * complex_escape_rate(d, x, y, iters); });
  return g;
}

Grid render_translation_plane(const MinCritMap& f, double lo, double hi, int steps, int iters, int threads) {
  if (f.N != 2) throw UsageError("the translation-plane render needs N = 2");
  if (iters < 0) throw UsageError("iterations must be non-negative");
  Grid g = make_grid(lo, hi, lo, hi, steps);
  fill(g, threads, [&](double y, double x) {
    const MinCritMap fb = MinCritMap::make(f.d, f.A, {mpq_class(x), mpq_class(y)});
    return delta_relative_critical(fb, iters, Place::infinity(), DeltaMode::Scaled).value.to_real().convert_to<double>();
  });
  return g;
}

std::pair<int, int> nearest_cell(const Grid& g, double x, double y) {
  auto nearest = [](const std::vector<double>& axis, double t) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(axis.size()); ++i)
      if (std::abs(axis[static_cast<std::size_t>(i)] - t) < std::abs(axis[static_cast<std::size_t>(best)] - t)) best = i;
    return best;
  };
  return {nearest(g.ys, y), nearest(g.xs, x)};
}

unsigned char gray_level(double value) {
  if (!(value >= 1e-3)) return 0;
  const double t = (std::log10(value) + 3.0) / 4.0;
  const long level = 1 + std::lround(254.0 * std::clamp(t, 0.0, 1.0));
  return static_cast<unsigned char>(std::clamp(level, 1L, 255L));
}

std::string to_pgm(const Grid& g) {
  std::string out = "P5\n" + std::to_string(g.width) + " " + std::to_string(g.height) + "\n255\n";
  for (double v : g.values) out.push_back(static_cast<char>(gray_level(v)));
  return out;
}

std::string to_csv(const Grid& g) {
  std::string out = "x,y,value\n";
  char buf[96];
  for (int r = 0; r < g.height; ++r)
    for (int c = 0; c < g.width; ++c) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.12e\n", g.xs[static_cast<std::size_t>(c)],
                    g.ys[static_cast<std::size_t>(r)], g.at(r, c));
      out += buf;
    }
  return out;
}

}  // namespace relesc
