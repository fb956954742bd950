#pragma once

#include <cstddef>
#include <vector>

#include "warpgate/image.hpp"
#include "warpgate/series.hpp"

namespace warpgate {

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

/// Closed clockwise boundary, starting at the top-left-most foreground pixel.
/// Consecutive points (including last -> first) are 8-neighbours.
struct Contour {
  std::vector<Point> points;
  std::size_t size() const noexcept { return points.size(); }
};

/// Percentile contrast stretch: the low_pct percentile maps to 0, the high_pct
/// percentile to 1, values outside are clamped. If the two percentiles
/// coincide, pixels above that level become 1 and the rest 0 (a constant
/// image therefore maps to all zeros).
GrayImage adjust(const GrayImage& img, double low_pct = 1.0, double high_pct = 99.0);

/// 1 where intensity >= t, else 0.
BinaryImage binarize(const GrayImage& img, double t = 0.5);

/// 1 - intensity, for dark-subject-on-light-background scans.
GrayImage invert(const GrayImage& img);

/// Moore-neighbour tracing of the first foreground region in row-major scan
/// order, stopping when the start pixel is re-entered with the initial
/// backtrack direction (Jacob's criterion). Pixels outside the raster count
/// as background.
///
/// Throws EmptyImage with no foreground, DegenerateRegion when the traced
/// boundary has fewer than 4 distinct pixels.
Contour trace_boundary(const BinaryImage& img);

/// All pixels of the 8-connected foreground region containing `seed`.
std::vector<Point> region_pixels(const BinaryImage& img, Point seed);

/// Unsigned angle (radians, [0, pi]) between the forward tangent towards
/// point i+delta and the backward tangent towards point i-delta; indices
/// wrap around the closed contour.
TimeSeries angle_series(const Contour& contour, int delta = 10);

/// Euclidean distance from each contour point to the centroid of the traced
/// region (mean over all its foreground pixels).
TimeSeries centroid_series(const BinaryImage& img, const Contour& contour);

enum class Technique { Angle, Centroid };

struct ExtractConfig {
  Technique technique = Technique::Centroid;
  double threshold = 0.5;
  int delta = 10;
  std::size_t target_len = 50;
  double low_pct = 1.0;
  double high_pct = 99.0;
  bool invert = false;
  bool znormalize = false;
};

/// adjust -> binarize -> trace_boundary -> angle|centroid -> resample.
/// Stage failures are re-raised with the stage name prepended.
TimeSeries extract(const GrayImage& img, const ExtractConfig& cfg = {});

}  // namespace warpgate
