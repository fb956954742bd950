#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "warpgate/band_learning.hpp"
#include "warpgate/series.hpp"

namespace warpgate {

/// Enrolled templates, the user's warping band and individual threshold.
struct UserProfile {
  std::string user_id;
  std::vector<TimeSeries> templates;
  BandConstraint band;
  double theta = 0.0;
};

enum class BandMode {
  LearnedRk,   ///< per-user band learned against the rest of the cohort
  SakoeChiba,  ///< fixed constant-width band for every user
};

enum class ThresholdRule {
  LooMax,         ///< max over templates of the distance to its nearest other template
  MeanPlusKSigma  ///< mean + k * stddev of those nearest-template distances
};

inline constexpr double kThetaFloor = 1e-9;

struct EnrollConfig {
  BandMode mode = BandMode::LearnedRk;
  int sc_width = 5;
  LearnConfig learn{};
  ThresholdRule rule = ThresholdRule::LooMax;
  double k_sigma = 2.0;
};

/// Learns (or assigns) the band, then sets theta from the user's own
/// templates, floored at kThetaFloor.
UserProfile enroll(const std::string& user_id, std::span<const TimeSeries> series,
                   std::span<const LabeledSeries> cohort, const EnrollConfig& cfg = {});

/// Enrolls every label in `dataset`, each against all other labels' series.
/// Profiles come back sorted by user id.
std::vector<UserProfile> enroll_all(std::span<const LabeledSeries> dataset, const EnrollConfig& cfg = {});

struct Decision {
  bool accept = false;
  double distance = 0.0;
};

/// Nearest-template DTW distance under the profile's band; accepted when
/// distance <= theta * g.
Decision verify(const UserProfile& profile, const TimeSeries& probe, double g, double p = kDefaultRootExponent);

struct TrialOutcome {
  std::string claimed_id;
  std::string truth_id;
  bool genuine = false;
  double distance = 0.0;
  double theta = 0.0;

  bool accepted_at(double g) const { return distance <= theta * g; }
};

struct EvalRow {
  double g = 0.0;
  std::size_t false_accepts = 0;
  std::size_t false_rejects = 0;
  std::size_t genuine_total = 0;
  std::size_t imposter_total = 0;
  double far = 0.0;  ///< percent
  double frr = 0.0;  ///< percent
  double tsr = 0.0;  ///< percent
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::vector<TrialOutcome> trials;
  double eer = 0.0;    ///< percent, at the interpolated FAR = FRR crossing
  double eer_g = 0.0;  ///< global threshold multiplier at that crossing
  double tsr_at_eer = 0.0;
  /// Interpolated FAR and FRR at eer_g; they coincide unless the sweep never crosses.
  double far_at_eer = 0.0;
  double frr_at_eer = 0.0;
};

/// `count` multipliers spaced geometrically from lo to hi inclusive.
std::vector<double> geometric_grid(double lo = 0.05, double hi = 5.0, std::size_t count = 200);

/// Throws ProtocolPrecondition, naming the user, unless there are at least
/// 2 users with at least 3 series each.
void check_protocol_dataset(std::span<const LabeledSeries> dataset);

/// One genuine trial per series against its owner re-enrolled without that
/// series, and one imposter trial against every other profile. Every user
/// needs at least 3 series.
std::vector<TrialOutcome> run_trials(std::span<const UserProfile> profiles, std::span<const LabeledSeries> dataset,
                                     const EnrollConfig& cfg = {});

/// FAR/FRR/TSR per multiplier and the interpolated equal-error point.
EvalReport sweep(std::vector<TrialOutcome> trials, std::span<const double> grid);

EvalReport evaluate_protocol(std::span<const UserProfile> profiles, std::span<const LabeledSeries> dataset,
                             std::span<const double> grid, const EnrollConfig& cfg = {});

// Profile store: {"series_len": N, "users": [{"id", "templates", "band", "theta"}]}.
void save_profiles(const std::filesystem::path& path, std::span<const UserProfile> profiles);
std::vector<UserProfile> load_profiles(const std::filesystem::path& path);
std::string profiles_to_json(std::span<const UserProfile> profiles);
std::vector<UserProfile> profiles_from_json(const std::string& text);

// Report artifacts.
std::string report_csv(const EvalReport& report);      ///< header G,far,frr,tsr,fa,fr
std::string report_summary_json(const EvalReport& report);
std::string roc_csv(const EvalReport& report);         ///< header G,far,frr

}  // namespace warpgate
