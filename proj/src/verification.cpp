#include "warpgate/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "warpgate/error.hpp"
#include "warpgate/format.hpp"
#include "warpgate/parallel.hpp"

namespace warpgate {

namespace {

double threshold_from(std::span<const TimeSeries> series, const BandConstraint& band, const EnrollConfig& cfg) {
  std::vector<double> nearest(series.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < series.size(); ++i) {
    for (std::size_t j = i + 1; j < series.size(); ++j) {
      const double d = dtw(series[i], series[j], band, cfg.learn.p).distance;
      nearest[i] = std::min(nearest[i], d);
      nearest[j] = std::min(nearest[j], d);
    }
  }
  double theta = 0.0;
  if (cfg.rule == ThresholdRule::LooMax) {
    theta = *std::max_element(nearest.begin(), nearest.end());
  } else {
    const double n = static_cast<double>(nearest.size());
    const double mean = std::accumulate(nearest.begin(), nearest.end(), 0.0) / n;
    double ss = 0.0;
    for (double d : nearest) ss += (d - mean) * (d - mean);
    theta = mean + cfg.k_sigma * std::sqrt(ss / n);
  }
  return std::max(theta, kThetaFloor);
}

std::map<std::string, std::vector<const LabeledSeries*>> group_by_label(std::span<const LabeledSeries> dataset) {
  std::map<std::string, std::vector<const LabeledSeries*>> groups;
  for (const auto& row : dataset) groups[row.label].push_back(&row);
  return groups;
}

std::vector<LabeledSeries> cohort_without(std::span<const LabeledSeries> dataset, const std::string& user) {
  std::vector<LabeledSeries> cohort;
  for (const auto& row : dataset) {
    if (row.label != user) cohort.push_back(row);
  }
  return cohort;
}

}  // namespace

UserProfile enroll(const std::string& user_id, std::span<const TimeSeries> series,
                   std::span<const LabeledSeries> cohort, const EnrollConfig& cfg) {
  if (series.size() < 2) {
    throw Error(ErrorKind::DegenerateTrainingSet,
                "user '" + user_id + "' needs at least 2 series to derive a threshold");
  }
  const std::size_t len = series.front().size();
  for (const auto& s : series) {
    if (s.size() != len) throw Error(ErrorKind::LengthMismatch, "templates of user '" + user_id + "' differ in length");
  }
  BandConstraint band = cfg.mode == BandMode::SakoeChiba ? make_sakoe_chiba(len, cfg.sc_width)
                                                         : learn_user_band(series, cohort, cfg.learn);
  const double theta = threshold_from(series, band, cfg);
  return UserProfile{user_id, std::vector<TimeSeries>(series.begin(), series.end()), std::move(band), theta};
}

std::vector<UserProfile> enroll_all(std::span<const LabeledSeries> dataset, const EnrollConfig& cfg) {
  std::vector<UserProfile> profiles;
  for (const auto& [user, rows] : group_by_label(dataset)) {
    std::vector<TimeSeries> own;
    for (const auto* r : rows) own.push_back(r->series);
    const auto cohort = cohort_without(dataset, user);
    profiles.push_back(enroll(user, own, cohort, cfg));
  }
  return profiles;
}

Decision verify(const UserProfile& profile, const TimeSeries& probe, double g, double p) {
  if (!(g > 0.0)) throw Error(ErrorKind::InvalidArgument, "global threshold multiplier must be positive");
  if (probe.size() != profile.band.size()) {
    throw Error(ErrorKind::LengthMismatch, "probe length " + std::to_string(probe.size()) +
                                               " differs from profile length " + std::to_string(profile.band.size()));
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : profile.templates) best = std::min(best, dtw(probe, t, profile.band, p).distance);
  return {best <= profile.theta * g, best};
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) {
    throw Error(ErrorKind::InvalidArgument, "grid needs 0 < lo < hi and at least 2 points");
  }
  std::vector<double> grid(count);
  const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) grid[k] = lo * std::exp(ratio * static_cast<double>(k));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

void check_protocol_dataset(std::span<const LabeledSeries> dataset) {
  const auto groups = group_by_label(dataset);
  if (groups.size() < 2) throw Error(ErrorKind::ProtocolPrecondition, "evaluation needs at least 2 users");
  for (const auto& [user, rows] : groups) {
    if (rows.size() < 3) {
      throw Error(ErrorKind::ProtocolPrecondition,
                  "user '" + user + "' has " + std::to_string(rows.size()) +
                      " series; leave-one-out enrollment needs at least 3");
    }
  }
}

std::vector<TrialOutcome> run_trials(std::span<const UserProfile> profiles, std::span<const LabeledSeries> dataset,
                                     const EnrollConfig& cfg) {
  const auto groups = group_by_label(dataset);
  std::map<std::string, const UserProfile*> by_id;
  for (const auto& p : profiles) by_id[p.user_id] = &p;
  check_protocol_dataset(dataset);
  for (const auto& [user, rows] : groups) {
    if (!by_id.count(user)) throw Error(ErrorKind::ProtocolPrecondition, "no profile for user '" + user + "'");
  }

  std::vector<TrialOutcome> trials;
  for (const auto& [user, rows] : groups) {
    const auto cohort = cohort_without(dataset, user);
    for (std::size_t held = 0; held < rows.size(); ++held) {
      std::vector<TimeSeries> rest;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i != held) rest.push_back(rows[i]->series);
      }
      const UserProfile loo = enroll(user, rest, cohort, cfg);
      const Decision d = verify(loo, rows[held]->series, 1.0, cfg.learn.p);
      trials.push_back({user, user, true, d.distance, loo.theta});
    }
  }

  struct Pending {
    const UserProfile* profile;
    const LabeledSeries* probe;
  };
  std::vector<Pending> imposters;
  for (const auto& row : dataset) {
    for (const auto& [id, profile] : by_id) {
      if (id != row.label && groups.count(id)) imposters.push_back({profile, &row});
    }
  }
  std::vector<TrialOutcome> imposter_out(imposters.size());
  parallel_for(imposters.size(), [&](std::size_t i) {
    const auto& job = imposters[i];
    const Decision d = verify(*job.profile, job.probe->series, 1.0, cfg.learn.p);
    imposter_out[i] = {job.profile->user_id, job.probe->label, false, d.distance, job.profile->theta};
  });
  trials.insert(trials.end(), imposter_out.begin(), imposter_out.end());
  return trials;
}

EvalReport sweep(std::vector<TrialOutcome> trials, std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty threshold grid");
  if (!std::is_sorted(grid.begin(), grid.end())) throw Error(ErrorKind::InvalidArgument, "threshold grid must be ascending");
  EvalReport report;
  std::size_t genuine = 0;
  for (const auto& t : trials) genuine += t.genuine ? 1 : 0;
  const std::size_t imposter = trials.size() - genuine;
  if (genuine == 0 || imposter == 0) {
    throw Error(ErrorKind::ProtocolPrecondition, "need both genuine and imposter trials");
  }
  const double total = static_cast<double>(trials.size());

  for (double g : grid) {
    EvalRow row;
    row.g = g;
    row.genuine_total = genuine;
    row.imposter_total = imposter;
    for (const auto& t : trials) {
      const bool accepted = t.accepted_at(g);
      if (t.genuine && !accepted) ++row.false_rejects;
      if (!t.genuine && accepted) ++row.false_accepts;
    }
    row.frr = 100.0 * static_cast<double>(row.false_rejects) / static_cast<double>(genuine);
    row.far = 100.0 * static_cast<double>(row.false_accepts) / static_cast<double>(imposter);
    row.tsr = 100.0 * (1.0 - static_cast<double>(row.false_accepts + row.false_rejects) / total);
    report.rows.push_back(row);
  }

  // FAR - FRR is non-decreasing in g; find the first row where it is >= 0.
  const auto& rows = report.rows;
  std::size_t k = 0;
  while (k < rows.size() && rows[k].far - rows[k].frr < 0.0) ++k;
  auto set_point = [&](double g, double far, double frr, double tsr) {
    report.eer_g = g;
    report.far_at_eer = far;
    report.frr_at_eer = frr;
    report.eer = 0.5 * (far + frr);
    report.tsr_at_eer = tsr;
  };
  if (k == rows.size()) {
    const auto& r = rows.back();
    set_point(r.g, r.far, r.frr, r.tsr);
  } else if (k == 0 || rows[k].far == rows[k].frr) {
    const auto& r = rows[k];
    set_point(r.g, r.far, r.frr, r.tsr);
  } else {
    const auto& a = rows[k - 1];
    const auto& b = rows[k];
    const double da = a.far - a.frr;
    const double db = b.far - b.frr;
    const double t = -da / (db - da);
    auto lerp = [t](double x, double y) { return x + t * (y - x); };
    set_point(lerp(a.g, b.g), lerp(a.far, b.far), lerp(a.frr, b.frr), lerp(a.tsr, b.tsr));
  }
  report.trials = std::move(trials);
  return report;
}

EvalReport evaluate_protocol(std::span<const UserProfile> profiles, std::span<const LabeledSeries> dataset,
                             std::span<const double> grid, const EnrollConfig& cfg) {
  return sweep(run_trials(profiles, dataset, cfg), grid);
}

std::string report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "G,far,frr,tsr,fa,fr\n";
  for (const auto& r : report.rows) {
    out << fixed6(r.g) << ',' << fixed6(r.far) << ',' << fixed6(r.frr) << ',' << fixed6(r.tsr) << ','
        << r.false_accepts << ',' << r.false_rejects << '\n';
  }
  return out.str();
}

std::string report_summary_json(const EvalReport& report) {
  return "{\"eer\": " + fixed6(report.eer) + ", \"eer_g\": " + fixed6(report.eer_g) +
         ", \"tsr_at_eer\": " + fixed6(report.tsr_at_eer) + "}\n";
}

std::string roc_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "G,far,frr\n";
  for (const auto& r : report.rows) out << fixed6(r.g) << ',' << fixed6(r.far) << ',' << fixed6(r.frr) << '\n';
  return out.str();
}

}  // namespace warpgate
