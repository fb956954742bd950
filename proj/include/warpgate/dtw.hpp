#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "warpgate/series.hpp"

namespace warpgate {

/// Monotone alignment path of 1-based (i, j) index pairs from (1,1) to (n,m).
struct WarpingPath {
  std::vector<std::pair<std::size_t, std::size_t>> steps;
};

struct DtwResult {
  double distance = 0.0;  ///< cost^(1/p)
  double cost = 0.0;      ///< sum of squared differences along the best path, before the root
  std::optional<WarpingPath> path;
};

/// Root exponent applied to the accumulated squared cost. p = 2 makes the
/// zero band coincide with the Euclidean distance.
inline constexpr double kDefaultRootExponent = 2.0;

/// Whether `band` admits cell (i, j) (0-based) for an n-by-m alignment.
/// Equal lengths: j - i <= r_i and i - j <= r_j. Unequal lengths project j
/// onto the first series' axis before applying the same rule.
bool band_permits(const BandConstraint& band, std::size_t i, std::size_t j, std::size_t n, std::size_t m);

/// Banded DTW: gamma(i,j) = (q_i - c_j)^2 + min(gamma(i-1,j-1), gamma(i-1,j), gamma(i,j-1))
/// over permitted cells, forbidden cells at +inf. Two rolling rows unless a
/// path is requested.
///
/// Throws LengthMismatch when band.size() != q.size(), NoFeasiblePath when
/// the band disconnects (1,1) from (n,m).
DtwResult dtw(const TimeSeries& q, const TimeSeries& c, const BandConstraint& band,
              double p = kDefaultRootExponent, bool want_path = false);

/// Exhaustive minimum over every monotone band-respecting path. Exponential;
/// both series must have at most kOracleMaxLength points.
inline constexpr std::size_t kOracleMaxLength = 8;
DtwResult dtw_oracle(const TimeSeries& q, const TimeSeries& c, const BandConstraint& band,
                     double p = kDefaultRootExponent);

/// Diagonal-only distance; identical to dtw with an all-zero band.
double lower_bound_diag(const TimeSeries& q, const TimeSeries& c, double p = kDefaultRootExponent);

/// Row-major n-by-n mask of the cells that lie on at least one complete
/// band-respecting path from (1,1) to (n,n). Two bands with equal masks give
/// identical DTW distances for every pair of series.
std::vector<std::uint8_t> usable_cells(const BandConstraint& band);

/// cost^(1/p) with sqrt for p = 2 and identity for p = 1.
double apply_root(double cost, double p);

}  // namespace warpgate
