#include "warpgate/imageproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <string>

#include "warpgate/error.hpp"

namespace warpgate {

namespace {

double percentile(std::vector<double>& values, double pct) {
  // Linear interpolation between closest ranks.
  const double rank = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, values.size() - 1);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double a = values[lo];
  if (hi == lo) return a;
  const double b = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
  return a + (rank - static_cast<double>(lo)) * (b - a);
}

}  // namespace

GrayImage adjust(const GrayImage& img, double low_pct, double high_pct) {
  if (!(low_pct >= 0.0 && low_pct < high_pct && high_pct <= 100.0)) {
    throw Error(ErrorKind::InvalidArgument, "adjust requires 0 <= low_pct < high_pct <= 100");
  }
  std::vector<double> scratch = img.pixels();
  const double lo = percentile(scratch, low_pct);
  const double hi = percentile(scratch, high_pct);

  std::vector<double> out(img.pixels().size());
  if (hi <= lo) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = img.pixels()[i] > lo ? 1.0 : 0.0;
  } else {
    const double span = hi - lo;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = std::clamp((img.pixels()[i] - lo) / span, 0.0, 1.0);
    }
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

BinaryImage binarize(const GrayImage& img, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::InvalidArgument, "binarization threshold outside [0,1]");
  std::vector<std::uint8_t> bits(img.pixels().size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = img.pixels()[i] >= t ? 1 : 0;
  return BinaryImage(img.width(), img.height(), std::move(bits));
}

GrayImage invert(const GrayImage& img) {
  std::vector<double> out(img.pixels().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 - img.pixels()[i];
  return GrayImage(img.width(), img.height(), std::move(out));
}

namespace {

// Clockwise on screen (y grows downwards), starting west.
constexpr std::array<Point, 8> kRing{{{-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}}};

int ring_index(int dx, int dy) {
  for (int k = 0; k < 8; ++k) {
    if (kRing[k].x == dx && kRing[k].y == dy) return k;
  }
  return -1;
}

std::optional<Point> first_foreground(const BinaryImage& img) {
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y)) return Point{x, y};
    }
  }
  return std::nullopt;
}

}  // namespace

Contour trace_boundary(const BinaryImage& img) {
  const auto start = first_foreground(img);
  if (!start) throw Error(ErrorKind::EmptyImage, "no foreground pixel in image");

  // Row-major scan guarantees the west neighbour of the start is background.
  constexpr int kStartBacktrack = 0;
  Contour contour;
  Point pos = *start;
  int backtrack = kStartBacktrack;
  const std::size_t step_cap = 4 * static_cast<std::size_t>(img.width()) * img.height() + 16;

  do {
    contour.points.push_back(pos);
    int found = -1;
    for (int k = 1; k <= 8; ++k) {
      const int d = (backtrack + k) % 8;
      if (img.at(pos.x + kRing[d].x, pos.y + kRing[d].y)) {
        found = d;
        break;
      }
    }
    if (found < 0) throw Error(ErrorKind::DegenerateRegion, "isolated single foreground pixel");

    // The neighbour examined just before `found` is background; it becomes
    // the backtrack pixel seen from the new position.
    const int prev = (found + 7) % 8;
    const Point next{pos.x + kRing[found].x, pos.y + kRing[found].y};
    const Point back{pos.x + kRing[prev].x, pos.y + kRing[prev].y};
    backtrack = ring_index(back.x - next.x, back.y - next.y);
    pos = next;

    if (contour.points.size() > step_cap) {
      throw Error(ErrorKind::DegenerateRegion, "boundary trace did not close");
    }
  } while (!(pos == *start && backtrack == kStartBacktrack));

  const std::set<Point> distinct(contour.points.begin(), contour.points.end());
  if (distinct.size() < 4) {
    throw Error(ErrorKind::DegenerateRegion,
                "boundary has only " + std::to_string(distinct.size()) + " distinct pixels");
  }
  return contour;
}

std::vector<Point> region_pixels(const BinaryImage& img, Point seed) {
  if (!img.at(seed.x, seed.y)) return {};
  std::vector<std::uint8_t> seen(img.bits().size(), 0);
  auto index = [&](Point p) { return static_cast<std::size_t>(p.y) * img.width() + p.x; };
  std::vector<Point> region;
  std::vector<Point> stack{seed};
  seen[index(seed)] = 1;
  while (!stack.empty()) {
    const Point p = stack.back();
    stack.pop_back();
    region.push_back(p);
    for (const Point& d : kRing) {
      const Point q{p.x + d.x, p.y + d.y};
      if (img.at(q.x, q.y) && !seen[index(q)]) {
        seen[index(q)] = 1;
        stack.push_back(q);
      }
    }
  }
  return region;
}

TimeSeries angle_series(const Contour& contour, int delta) {
  if (delta < 1) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  const std::size_t len = contour.size();
  if (len <= 2 * static_cast<std::size_t>(delta)) {
    throw Error(ErrorKind::InvalidArgument, "contour of " + std::to_string(len) +
                                                " points is too short for delta " + std::to_string(delta));
  }
  const auto& pts = contour.points;
  const std::size_t d = static_cast<std::size_t>(delta);
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    const Point& p = pts[i];
    const Point& f = pts[(i + d) % len];
    const Point& b = pts[(i + len - d) % len];
    const double fx = f.x - p.x, fy = f.y - p.y;
    const double bx = b.x - p.x, by = b.y - p.y;
    const double fn = std::hypot(fx, fy);
    const double bn = std::hypot(bx, by);
    if (fn == 0.0 || bn == 0.0) {
      throw Error(ErrorKind::DegenerateTangent, "zero-length tangent at contour index " + std::to_string(i));
    }
    const double cosine = std::clamp((fx * bx + fy * by) / (fn * bn), -1.0, 1.0);
    out[i] = std::acos(cosine);
  }
  return TimeSeries(std::move(out));
}

TimeSeries centroid_series(const BinaryImage& img, const Contour& contour) {
  if (contour.points.empty()) throw Error(ErrorKind::EmptyImage, "empty contour");
  const Point origin = contour.points.front();
  const auto region = region_pixels(img, origin);
  if (region.empty()) throw Error(ErrorKind::EmptyImage, "contour start is not a foreground pixel");

  // Accumulate offsets from the contour start so the result is exactly
  // invariant under integer translation.
  long long sx = 0, sy = 0;
  for (const Point& p : region) {
    sx += p.x - origin.x;
    sy += p.y - origin.y;
  }
  const double n = static_cast<double>(region.size());
  const double cx = static_cast<double>(sx) / n;
  const double cy = static_cast<double>(sy) / n;

  std::vector<double> out(contour.size());
  for (std::size_t i = 0; i < contour.size(); ++i) {
    const double dx = (contour.points[i].x - origin.x) - cx;
    const double dy = (contour.points[i].y - origin.y) - cy;
    out[i] = std::hypot(dx, dy);
  }
  return TimeSeries(std::move(out));
}

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage ") + name + ": " + e.detail());
  }
}

}  // namespace

TimeSeries extract(const GrayImage& img, const ExtractConfig& cfg) {
  const GrayImage source = cfg.invert ? invert(img) : img;
  const GrayImage adjusted = stage("adjust", [&] { return adjust(source, cfg.low_pct, cfg.high_pct); });
  const BinaryImage binary = stage("binarize", [&] { return binarize(adjusted, cfg.threshold); });
  const Contour contour = stage("trace_boundary", [&] { return trace_boundary(binary); });
  TimeSeries raw = cfg.technique == Technique::Angle
                       ? stage("angle_series", [&] { return angle_series(contour, cfg.delta); })
                       : stage("centroid_series", [&] { return centroid_series(binary, contour); });
  TimeSeries out = stage("resample", [&] { return resample(raw, cfg.target_len); });
  return cfg.znormalize ? znormalize(out) : out;
}

}  // namespace warpgate
