#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace warpgate {

/// Fixed-length sequence of finite reals. Every series has at least two
/// points; construction rejects shorter input and NaN/inf values.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  std::vector<double> values_;
};

/// Per-index warping-window radii. Radius r_i bounds how far the path may
/// run above the diagonal in row i and to the right of it in column i.
/// All zeros is the Euclidean (diagonal-only) case; all n is unconstrained.
class BandConstraint {
 public:
  explicit BandConstraint(std::vector<int> radii);

  std::size_t size() const noexcept { return radii_.size(); }
  int operator[](std::size_t i) const noexcept { return radii_[i]; }
  std::span<const int> radii() const noexcept { return radii_; }

  /// Sum of radii; a coarse "width" used to compare nested bands.
  long long area() const noexcept;

  /// True when every cell this band permits is also permitted by `other`.
  bool within(const BandConstraint& other) const;

  friend bool operator==(const BandConstraint&, const BandConstraint&) = default;

 private:
  std::vector<int> radii_;
};

struct LabeledSeries {
  LabeledSeries(TimeSeries s, std::string l);

  TimeSeries series;
  std::string label;
};

/// Uniform piecewise-linear resampling with both endpoints preserved.
TimeSeries resample(const TimeSeries& series, std::size_t target_len);

/// Constant-width (Sakoe-Chiba) band: every radius equals `width`.
BandConstraint make_sakoe_chiba(std::size_t n, int width);

/// Zero mean, unit variance. Constant series map to all zeros.
TimeSeries znormalize(const TimeSeries& series);

// Series CSV: one series per line, `label,v1,...,vN`, no header.
std::vector<LabeledSeries> read_series_csv(const std::filesystem::path& path);
std::vector<LabeledSeries> parse_series_csv(const std::string& text);
void write_series_csv(const std::filesystem::path& path, std::span<const LabeledSeries> rows);
std::string format_series_csv(std::span<const LabeledSeries> rows);

}  // namespace warpgate
