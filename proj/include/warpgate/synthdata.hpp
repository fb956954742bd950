#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "warpgate/image.hpp"

namespace warpgate {

/// Portable uniform source: std::mt19937_64 (bit-exact by the standard) with
/// the top 53 bits mapped to [0, 1). No std distributions are used, so
/// cohorts are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Finger order: thumb, index, middle, ring, little.
inline constexpr std::size_t kFingers = 5;

/// Geometry of one synthetic hand. Lengths and widths are in pixels at the
/// reference 400x400 raster; widths are measured at the palm edge.
struct HandParams {
  std::array<double, kFingers> finger_lengths{};
  std::array<double, kFingers> finger_widths{};
  std::array<double, kFingers> finger_angles{};  ///< lobe directions, radians, thumb first
  double palm_radius = 0.0;
  double noise_sigma = 0.0;    ///< boundary jitter, relative to palm radius
  double warp_strength = 0.0;  ///< angular re-parameterisation strength, [0, 1)
  std::uint64_t seed = 0;

  friend bool operator==(const HandParams&, const HandParams&) = default;
};

struct SynthConfig {
  int size = 400;              ///< square raster side in pixels
  double spread = 1.0;         ///< scales how far users deviate from the nominal hand
  double noise_sigma = 0.02;
  double warp_strength = 0.3;
};

/// Finger slot directions (radians, counter-clockwise from +x, y up).
std::array<double, kFingers> finger_slots();

/// Throws InvalidHandParams when a dimension is non-positive, the warp is
/// outside [0, 1), or adjacent finger lobes overlap at their slots.
void validate(const HandParams& params);

HandParams gen_user(std::uint64_t seed, const SynthConfig& cfg = {});

/// Palm disk plus five radial finger lobes, with per-sample boundary jitter
/// and a smooth monotone angular warp. The foreground is a single region
/// clear of the raster border.
BinaryImage gen_sample(const HandParams& params, std::uint64_t sample_seed, int size = 400);

struct CohortImage {
  BinaryImage image;
  std::string label;
};

/// `users` x `samples_per_user` images, labels "user00", "user01", ...
std::vector<CohortImage> gen_cohort(int users, int samples_per_user, std::uint64_t seed, const SynthConfig& cfg = {});

}  // namespace warpgate
