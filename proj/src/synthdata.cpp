#include "warpgate/synthdata.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "warpgate/error.hpp"
#include "warpgate/imageproc.hpp"

namespace warpgate {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;
constexpr int kReferenceSize = 400;

// Nominal hand at the reference raster, as multiples of the palm radius,
// with the half-range each user may deviate by at spread 1.
constexpr double kPalmNominal = 75.0;
constexpr double kPalmRange = 5.0;
constexpr std::array<double, kFingers> kLengthNominal{0.80, 1.05, 1.20, 1.05, 0.80};
constexpr std::array<double, kFingers> kLengthRange{0.10, 0.10, 0.10, 0.10, 0.10};
constexpr std::array<double, kFingers> kWidthNominal{0.42, 0.34, 0.34, 0.34, 0.32};
constexpr std::array<double, kFingers> kWidthRange{0.05, 0.04, 0.04, 0.04, 0.04};
// Degrees each finger direction may deviate from its slot.
constexpr std::array<double, kFingers> kAngleRange{8.0, 1.0, 1.0, 1.0, 1.5};

// Pose terms at warp strength 1: whole-hand rotation and thumb abduction, radians.
constexpr double kRotation = 0.25;
constexpr double kAbduction = 0.5;

constexpr double kLobeMargin = 0.02;  // radians between neighbouring lobes
constexpr int kJitterHarmonics = 5;

// Raised cosine over one half-width. A rounded tip keeps the topmost pixel,
// where tracing starts, in a stable place.
double lobe(double x) {
  x = std::abs(x);
  if (x >= 1.0) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * x));
}

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0) a += 2.0 * kPi;
  return a - kPi;
}

double half_width(const HandParams& p, std::size_t k) { return p.finger_widths[k] / (2.0 * p.palm_radius); }

// Per-sample random terms.
struct SampleShape {
  double warp_amplitude = 0.0;
  int warp_frequency = 2;
  double warp_phase = 0.0;
  double rotation = 0.0;
  double abduction = 0.0;
  // Hand centroid relative to the palm centre, for the noise-free pose.
  double centre_x = 0.0;
  double centre_y = 0.0;
  std::array<double, kJitterHarmonics> jitter_amp{};
  std::array<double, kJitterHarmonics> jitter_phase{};
  std::array<double, kFingers> length_scale{};
};

SampleShape draw_shape(const HandParams& p, std::uint64_t sample_seed) {
  Rng rng(mix_seed(p.seed, sample_seed));
  SampleShape s;
  s.warp_frequency = 2 + static_cast<int>(rng.next() % 2);
  s.warp_phase = rng.uniform(0.0, 2.0 * kPi);
  s.warp_amplitude = p.warp_strength * rng.uniform(0.5, 1.0);
  for (int h = 0; h < kJitterHarmonics; ++h) {
    s.jitter_amp[h] = rng.uniform(-1.0, 1.0);
    s.jitter_phase[h] = rng.uniform(0.0, 2.0 * kPi);
  }
  for (auto& scale : s.length_scale) scale = 1.0 + p.noise_sigma * rng.uniform(-1.0, 1.0);
  s.rotation = p.warp_strength * kRotation * rng.uniform(-1.0, 1.0);
  s.abduction = p.warp_strength * kAbduction * rng.uniform(0.0, 1.0);
  return s;
}

// Boundary radius at direction phi, in reference pixels.
double radius_at(const HandParams& p, const SampleShape& s, double phi) {
  // phi -> phi + a/k sin(k phi + c) is strictly increasing for a < 1.
  const double src = phi + s.warp_amplitude / s.warp_frequency * std::sin(s.warp_frequency * phi + s.warp_phase) -
                     s.rotation;
  // Between the fingers the palm is a disk. On the far side, from the outer
  // edge of the little finger round to the outer edge of the thumb, the
  // distance from the hand's centroid moves monotonically between its two end
  // values, so the heel adds no extra maximum to the centroid profile.
  double rho = p.palm_radius;
  const double start = p.finger_angles[kFingers - 1] - half_width(p, kFingers - 1);
  const double end = p.finger_angles[0] + half_width(p, 0);
  const double span = 2.0 * kPi - (end - start);
  double behind = std::fmod(start - src, 2.0 * kPi);
  if (behind < 0.0) behind += 2.0 * kPi;
  if (behind < span) {
    const double cxx = s.centre_x, cyy = s.centre_y, r = p.palm_radius;
    const double from = std::hypot(r * std::cos(start) - cxx, r * std::sin(start) - cyy);
    const double to = std::hypot(r * std::cos(end) - cxx, r * std::sin(end) - cyy);
    const double target = from + (to - from) * (behind / span);
    const double along = std::cos(src) * cxx + std::sin(src) * cyy;
    rho = along + std::sqrt(along * along - cxx * cxx - cyy * cyy + target * target);
  }
  for (std::size_t k = 0; k < kFingers; ++k) {
    // The thumb swings away from the index finger.
    const double dir = p.finger_angles[k] + (k == 0 ? s.abduction : 0.0);
    const double offset = wrap_angle(src - dir);
    rho += p.finger_lengths[k] * s.length_scale[k] * lobe(offset / half_width(p, k));
  }
  // Scaled so the jitter has RMS noise_sigma * palm_radius around the contour.
  double jitter = 0.0, power = 0.0;
  for (int h = 0; h < kJitterHarmonics; ++h) {
    jitter += s.jitter_amp[h] * std::cos((h + 2) * src + s.jitter_phase[h]);
    power += s.jitter_amp[h] * s.jitter_amp[h] / 2.0;
  }
  if (power > 0.0) rho += p.noise_sigma * p.palm_radius * jitter / std::sqrt(power);
  return rho;
}

// Fixed point of the centroid for the noise-free, unposed hand; the heel
// shape depends on it.
void settle_centroid(const HandParams& p, SampleShape& shape) {
  SampleShape neutral;
  neutral.length_scale.fill(1.0);
  constexpr int kSteps = 3600;
  for (int iter = 0; iter < 8; ++iter) {
    double area = 0.0, mx = 0.0, my = 0.0;
    for (int i = 0; i < kSteps; ++i) {
      const double phi = 2.0 * kPi * (i + 0.5) / kSteps;
      const double rho = radius_at(p, neutral, phi);
      area += rho * rho / 2.0;
      mx += rho * rho * rho / 3.0 * std::cos(phi);
      my += rho * rho * rho / 3.0 * std::sin(phi);
    }
    neutral.centre_x = mx / area;
    neutral.centre_y = my / area;
  }
  shape.centre_x = neutral.centre_x;
  shape.centre_y = neutral.centre_y;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::array<double, kFingers> finger_slots() {
  return {160.0 * kDeg, 115.0 * kDeg, 90.0 * kDeg, 65.0 * kDeg, 40.0 * kDeg};
}

void validate(const HandParams& p) {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::InvalidHandParams, why); };
  if (!(p.palm_radius > 0.0)) fail("palm radius must be positive");
  for (std::size_t k = 0; k < kFingers; ++k) {
    if (!(p.finger_lengths[k] > 0.0)) fail("finger " + std::to_string(k) + " length must be positive");
    if (!(p.finger_widths[k] > 0.0)) fail("finger " + std::to_string(k) + " width must be positive");
  }
  if (!(p.noise_sigma >= 0.0)) fail("noise sigma must be non-negative");
  if (!(p.warp_strength >= 0.0 && p.warp_strength < 1.0)) fail("warp strength must lie in [0, 1)");

  for (std::size_t k = 0; k < kFingers; ++k) {
    if (!std::isfinite(p.finger_angles[k])) fail("finger " + std::to_string(k) + " direction must be finite");
  }
  for (std::size_t k = 0; k + 1 < kFingers; ++k) {
    const std::size_t next = k + 1;
    const double gap = wrap_angle(p.finger_angles[k] - p.finger_angles[next]);
    if (half_width(p, k) + half_width(p, next) + kLobeMargin > gap) {
      fail("finger lobes " + std::to_string(k) + " and " + std::to_string(next) + " overlap");
    }
  }
  // The tallest point must stay inside the reference raster with a margin.
  double reach = p.palm_radius;
  for (double len : p.finger_lengths) reach = std::max(reach, p.palm_radius + len * (1.0 + p.noise_sigma));
  // Peak jitter is at most sqrt(2 * harmonics) times its RMS.
  reach += std::sqrt(2.0 * kJitterHarmonics) * p.noise_sigma * p.palm_radius;
  if (reach > 0.58 * kReferenceSize - 4.0) fail("hand does not fit the raster");
}

HandParams gen_user(std::uint64_t seed, const SynthConfig& cfg) {
  Rng rng(mix_seed(seed, 0x68616e64ULL));
  HandParams p;
  p.seed = seed;
  p.palm_radius = kPalmNominal + cfg.spread * kPalmRange * rng.uniform(-1.0, 1.0);
  for (std::size_t k = 0; k < kFingers; ++k) {
    p.finger_lengths[k] = p.palm_radius * (kLengthNominal[k] + cfg.spread * kLengthRange[k] * rng.uniform(-1.0, 1.0));
  }
  for (std::size_t k = 0; k < kFingers; ++k) {
    p.finger_widths[k] = p.palm_radius * (kWidthNominal[k] + cfg.spread * kWidthRange[k] * rng.uniform(-1.0, 1.0));
  }
  const auto slots = finger_slots();
  for (std::size_t k = 0; k < kFingers; ++k) {
    p.finger_angles[k] = slots[k] + cfg.spread * kAngleRange[k] * kDeg * rng.uniform(-1.0, 1.0);
  }
  p.noise_sigma = cfg.noise_sigma;
  p.warp_strength = cfg.warp_strength;
  return p;
}

BinaryImage gen_sample(const HandParams& params, std::uint64_t sample_seed, int size) {
  validate(params);
  if (size < 64) throw Error(ErrorKind::InvalidArgument, "raster size must be at least 64");
  SampleShape shape = draw_shape(params, sample_seed);
  settle_centroid(params, shape);
  const double scale = static_cast<double>(size) / kReferenceSize;
  const double cx = 0.5 * size;
  const double cy = 0.6 * size;

  BinaryImage img(size, size);
  std::size_t count = 0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = (x - cx) / scale;
      const double dy = (cy - y) / scale;
      const double r = std::hypot(dx, dy);
      if (r <= radius_at(params, shape, std::atan2(dy, dx))) {
        img.set(x, y, true);
        ++count;
      }
    }
  }

  for (int i = 0; i < size; ++i) {
    if (img.at(i, 0) || img.at(i, size - 1) || img.at(0, i) || img.at(size - 1, i)) {
      throw Error(ErrorKind::InvalidHandParams, "hand touches the raster border");
    }
  }
  const auto contour = trace_boundary(img);
  if (region_pixels(img, contour.points.front()).size() != count) {
    throw Error(ErrorKind::InvalidHandParams, "rasterised hand is not a single region");
  }
  return img;
}

std::vector<CohortImage> gen_cohort(int users, int samples_per_user, std::uint64_t seed, const SynthConfig& cfg) {
  if (users < 2) throw Error(ErrorKind::InvalidArgument, "cohort needs at least 2 users");
  if (samples_per_user < 3) throw Error(ErrorKind::InvalidArgument, "cohort needs at least 3 samples per user");
  std::vector<CohortImage> out;
  out.reserve(static_cast<std::size_t>(users) * samples_per_user);
  for (int u = 0; u < users; ++u) {
    const HandParams params = gen_user(mix_seed(seed, static_cast<std::uint64_t>(u)), cfg);
    char label[32];
    std::snprintf(label, sizeof label, "user%02d", u);
    for (int s = 0; s < samples_per_user; ++s) {
      out.push_back({gen_sample(params, static_cast<std::uint64_t>(s), cfg.size), label});
    }
  }
  return out;
}

}  // namespace warpgate
