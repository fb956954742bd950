#pragma once

// Shared fixtures and reference computations for the unit and acceptance
// suites. The references here are deliberately naive so they can check the
// library's optimised code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "warpgate/image.hpp"
#include "warpgate/series.hpp"

namespace wgtest {

using warpgate::BandConstraint;
using warpgate::BinaryImage;
using warpgate::LabeledSeries;
using warpgate::TimeSeries;

inline TimeSeries random_series(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return TimeSeries(std::move(v));
}

inline TimeSeries random_int_series(std::mt19937_64& rng, std::size_t n, int lo, int hi) {
  std::uniform_int_distribution<int> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return TimeSeries(std::move(v));
}

inline BandConstraint random_band(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> u(0, static_cast<int>(n));
  std::vector<int> r(n);
  for (auto& x : r) x = u(rng);
  return BandConstraint(std::move(r));
}

inline BandConstraint zero_band(std::size_t n) { return BandConstraint(std::vector<int>(n, 0)); }
inline BandConstraint full_band(std::size_t n) { return BandConstraint(std::vector<int>(n, static_cast<int>(n))); }

// Pre-root cost of the lock-step alignment.
inline double diagonal_cost(const TimeSeries& a, const TimeSeries& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Textbook full-matrix DTW with no window at all.
inline double unconstrained_cost(const TimeSeries& a, const TimeSeries& b) {
  const std::size_t n = a.size(), m = b.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> g(n + 1, std::vector<double>(m + 1, inf));
  g[0][0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const double d = (a[i - 1] - b[j - 1]) * (a[i - 1] - b[j - 1]);
      g[i][j] = d + std::min({g[i - 1][j - 1], g[i - 1][j], g[i][j - 1]});
    }
  }
  return g[n][m];
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline BinaryImage disk(int size, double cx, double cy, double r) {
  BinaryImage img(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img.set(x, y, true);
    }
  }
  return img;
}

inline BinaryImage rect(int w, int h, int x0, int y0, int rw, int rh) {
  BinaryImage img(w, h);
  for (int y = y0; y < y0 + rh; ++y) {
    for (int x = x0; x < x0 + rw; ++x) img.set(x, y, true);
  }
  return img;
}

// Random blob: union of a few overlapping disks, kept connected by anchoring
// every disk on the first one's centre.
inline BinaryImage random_blob(std::mt19937_64& rng, int size) {
  std::uniform_real_distribution<double> r(4.0, 9.0), off(-6.0, 6.0);
  BinaryImage img(size, size);
  const double cx = size / 2.0, cy = size / 2.0;
  const int parts = 2 + static_cast<int>(rng() % 3);
  for (int k = 0; k < parts; ++k) {
    const double px = cx + (k == 0 ? 0.0 : off(rng)), py = cy + (k == 0 ? 0.0 : off(rng));
    const double pr = std::max(r(rng), std::hypot(px - cx, py - cy) + 1.5);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        if ((x - px) * (x - px) + (y - py) * (y - py) <= pr * pr) img.set(x, y, true);
      }
    }
  }
  return img;
}

inline BinaryImage shifted(const BinaryImage& src, int dx, int dy, int w, int h) {
  BinaryImage out(w, h);
  for (int y = 0; y < src.height(); ++y) {
    for (int x = 0; x < src.width(); ++x) {
      if (src.at(x, y)) out.set(x + dx, y + dy, true);
    }
  }
  return out;
}

// Two classes of length-n series built from two Gaussian bumps. Class B is
// class A with the second bump moved later, i.e. a local time shift confined
// to the second half. Each instance also jitters both bump positions, which
// is what the warping window has to absorb.
inline std::vector<LabeledSeries> warped_pair_dataset(std::uint64_t seed, std::size_t per_class = 10,
                                                      std::size_t n = 50) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-2.0, 2.0), noise(-0.05, 0.05);
  const double scale = static_cast<double>(n) / 50.0;
  auto make = [&](double shift) {
    const double c1 = (12.0 + jitter(rng)) * scale;
    const double c2 = (33.0 + shift + jitter(rng)) * scale;
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) {
      const double x = static_cast<double>(t);
      v[t] = std::exp(-0.5 * std::pow((x - c1) / 2.5, 2)) + std::exp(-0.5 * std::pow((x - c2) / 2.5, 2)) + noise(rng);
    }
    return TimeSeries(std::move(v));
  };
  std::vector<LabeledSeries> out;
  for (std::size_t i = 0; i < per_class; ++i) out.emplace_back(make(0.0), "A");
  for (std::size_t i = 0; i < per_class; ++i) out.emplace_back(make(6.0), "B");
  return out;
}

// Leave-one-out 1-NN accuracy with the Euclidean distance, written out
// independently of the learner.
inline double euclidean_loo_accuracy(const std::vector<LabeledSeries>& data) {
  std::size_t correct = 0;
  for (std::size_t q = 0; q < data.size(); ++q) {
    double best = std::numeric_limits<double>::infinity();
    std::string label;
    for (std::size_t t = 0; t < data.size(); ++t) {
      if (t == q) continue;
      const double d = diagonal_cost(data[q].series, data[t].series);
      if (d < best) {
        best = d;
        label = data[t].label;
      }
    }
    correct += label == data[q].label ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace wgtest
