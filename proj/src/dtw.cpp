#include "warpgate/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "warpgate/error.hpp"

namespace warpgate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t project(std::size_t j, std::size_t n, std::size_t m) {
  if (n == m || m == 1) return j;
  return static_cast<std::size_t>(std::llround(static_cast<double>(j) * static_cast<double>(n - 1) /
                                               static_cast<double>(m - 1)));
}

void check_band(const TimeSeries& q, const BandConstraint& band) {
  if (band.size() != q.size()) {
    throw Error(ErrorKind::LengthMismatch, "band length " + std::to_string(band.size()) +
                                               " differs from series length " + std::to_string(q.size()));
  }
}

void check_root(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "root exponent must be positive");
}

// Column range that can contain permitted cells of row i (equal lengths).
std::pair<std::size_t, std::size_t> row_span(const BandConstraint& band, std::size_t i, std::size_t m, int max_radius) {
  const std::size_t lo = i > static_cast<std::size_t>(max_radius) ? i - max_radius : 0;
  const std::size_t hi = std::min(m - 1, i + static_cast<std::size_t>(band[i]));
  return {lo, hi};
}

}  // namespace

double apply_root(double cost, double p) {
  if (p == 2.0) return std::sqrt(cost);
  if (p == 1.0) return cost;
  return std::pow(cost, 1.0 / p);
}

bool band_permits(const BandConstraint& band, std::size_t i, std::size_t j, std::size_t n, std::size_t m) {
  const std::size_t k = project(j, n, m);
  if (k > i && k - i > static_cast<std::size_t>(band[i])) return false;
  if (i > k && i - k > static_cast<std::size_t>(band[k])) return false;
  return true;
}

DtwResult dtw(const TimeSeries& q, const TimeSeries& c, const BandConstraint& band, double p, bool want_path) {
  check_band(q, band);
  check_root(p);
  const std::size_t n = q.size();
  const std::size_t m = c.size();
  const bool square = n == m;
  const int max_radius = *std::max_element(band.radii().begin(), band.radii().end());

  auto span_of = [&](std::size_t i) -> std::pair<std::size_t, std::size_t> {
    if (square) return row_span(band, i, m, max_radius);
    return {0, m - 1};
  };

  auto relax = [&](const double* prev, const double* cur, std::size_t i, std::size_t j) {
    double best = kInf;
    if (i > 0) {
      best = std::min(best, prev[j]);
      if (j > 0) best = std::min(best, prev[j - 1]);
    }
    if (j > 0) best = std::min(best, cur[j - 1]);
    if (i == 0 && j == 0) best = 0.0;
    const double diff = q[i] - c[j];
    return best + diff * diff;
  };

  DtwResult result;
  if (!want_path && square) {
    const auto r = band.radii();
    std::vector<double> prev(m, kInf), cur(m, kInf);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(cur.begin(), cur.end(), kInf);
      const auto [lo, hi] = row_span(band, i, m, max_radius);
      const double qi = q[i];
      for (std::size_t j = lo; j <= hi; ++j) {
        if (i > j && i - j > static_cast<std::size_t>(r[j])) continue;
        double best = i == 0 && j == 0 ? 0.0 : kInf;
        if (i > 0) best = std::min(best, std::min(prev[j], j > 0 ? prev[j - 1] : kInf));
        if (j > 0) best = std::min(best, cur[j - 1]);
        const double diff = qi - c[j];
        cur[j] = best + diff * diff;
      }
      std::swap(prev, cur);
    }
    result.cost = prev[m - 1];
  } else if (!want_path) {
    std::vector<double> prev(m, kInf), cur(m, kInf);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(cur.begin(), cur.end(), kInf);
      const auto [lo, hi] = span_of(i);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (!band_permits(band, i, j, n, m)) continue;
        cur[j] = relax(prev.data(), cur.data(), i, j);
      }
      std::swap(prev, cur);
    }
    result.cost = prev[m - 1];
  } else {
    std::vector<double> grid(n * m, kInf);
    for (std::size_t i = 0; i < n; ++i) {
      const double* prev = i > 0 ? &grid[(i - 1) * m] : nullptr;
      double* cur = &grid[i * m];
      const auto [lo, hi] = span_of(i);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (!band_permits(band, i, j, n, m)) continue;
        cur[j] = relax(prev, cur, i, j);
      }
    }
    result.cost = grid[n * m - 1];
    if (std::isfinite(result.cost)) {
      WarpingPath path;
      std::size_t i = n - 1, j = m - 1;
      path.steps.emplace_back(i + 1, j + 1);
      while (i > 0 || j > 0) {
        // Prefer the diagonal on ties, then the vertical, then the horizontal step.
        double best = kInf;
        std::size_t bi = i, bj = j;
        auto consider = [&](std::size_t ii, std::size_t jj) {
          const double v = grid[ii * m + jj];
          if (v < best) {
            best = v;
            bi = ii;
            bj = jj;
          }
        };
        if (i > 0 && j > 0) consider(i - 1, j - 1);
        if (i > 0) consider(i - 1, j);
        if (j > 0) consider(i, j - 1);
        i = bi;
        j = bj;
        path.steps.emplace_back(i + 1, j + 1);
      }
      std::reverse(path.steps.begin(), path.steps.end());
      result.path = std::move(path);
    }
  }

  if (!std::isfinite(result.cost)) {
    throw Error(ErrorKind::NoFeasiblePath, "band leaves cell (" + std::to_string(n) + "," + std::to_string(m) +
                                               ") unreachable");
  }
  result.distance = apply_root(result.cost, p);
  return result;
}

std::vector<std::uint8_t> usable_cells(const BandConstraint& band) {
  const std::size_t n = band.size();
  std::vector<std::uint8_t> forward(n * n, 0), backward(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!band_permits(band, i, j, n, n)) continue;
      const bool reach = (i == 0 && j == 0) || (i > 0 && forward[(i - 1) * n + j]) ||
                         (j > 0 && forward[i * n + j - 1]) || (i > 0 && j > 0 && forward[(i - 1) * n + j - 1]);
      forward[i * n + j] = reach ? 1 : 0;
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = n; j-- > 0;) {
      if (!forward[i * n + j]) continue;
      const bool reach = (i == n - 1 && j == n - 1) || (i + 1 < n && backward[(i + 1) * n + j]) ||
                         (j + 1 < n && backward[i * n + j + 1]) ||
                         (i + 1 < n && j + 1 < n && backward[(i + 1) * n + j + 1]);
      backward[i * n + j] = reach ? 1 : 0;
    }
  }
  return backward;
}

namespace {

struct PathEnumerator {
  const TimeSeries& q;
  const TimeSeries& c;
  const BandConstraint& band;
  std::size_t n, m;
  double best = kInf;
  std::vector<std::pair<std::size_t, std::size_t>> current;
  std::vector<std::pair<std::size_t, std::size_t>> best_path;

  void walk(std::size_t i, std::size_t j, double cost) {
    if (!band_permits(band, i, j, n, m)) return;
    const double diff = q[i] - c[j];
    cost += diff * diff;
    current.emplace_back(i + 1, j + 1);
    if (i == n - 1 && j == m - 1) {
      if (cost < best) {
        best = cost;
        best_path = current;
      }
    } else {
      if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, cost);
      if (i + 1 < n) walk(i + 1, j, cost);
      if (j + 1 < m) walk(i, j + 1, cost);
    }
    current.pop_back();
  }
};

}  // namespace

DtwResult dtw_oracle(const TimeSeries& q, const TimeSeries& c, const BandConstraint& band, double p) {
  check_band(q, band);
  check_root(p);
  if (q.size() > kOracleMaxLength || c.size() > kOracleMaxLength) {
    throw Error(ErrorKind::EnumerationLimit, "path enumeration is capped at length " +
                                                 std::to_string(kOracleMaxLength));
  }
  PathEnumerator e{q, c, band, q.size(), c.size(), kInf, {}, {}};
  e.walk(0, 0, 0.0);
  if (!std::isfinite(e.best)) throw Error(ErrorKind::NoFeasiblePath, "no band-respecting path");
  DtwResult r;
  r.cost = e.best;
  r.distance = apply_root(e.best, p);
  r.path = WarpingPath{std::move(e.best_path)};
  return r;
}

double lower_bound_diag(const TimeSeries& q, const TimeSeries& c, double p) {
  if (q.size() != c.size()) {
    throw Error(ErrorKind::LengthMismatch, "diagonal distance needs equal lengths");
  }
  check_root(p);
  double cost = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double diff = q[i] - c[i];
    cost += diff * diff;
  }
  return apply_root(cost, p);
}

}  // namespace warpgate
