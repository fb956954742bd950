#include "warpgate/band_learning.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "warpgate/error.hpp"
#include "warpgate/parallel.hpp"

namespace warpgate {

namespace {

constexpr double kSeparationFloor = 1e-12;

/// Training set sorted by label (stable), with a cached query-by-template
/// distance matrix that is refreshed one class at a time.
class LooEvaluator {
 public:
  LooEvaluator(std::span<const LabeledSeries> train, double p) : p_(p) {
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return train[a].label < train[b].label; });
    for (std::size_t idx : order) {
      const auto& row = train[idx];
      if (labels_.empty() || labels_.back() != row.label) labels_.push_back(row.label);
      series_.push_back(&row.series);
      class_of_.push_back(labels_.size() - 1);
    }
    validate();
    members_.resize(labels_.size());
    for (std::size_t i = 0; i < series_.size(); ++i) members_[class_of_[i]].push_back(i);
    dist_.assign(series_.size() * series_.size(), 0.0);
  }

  std::size_t size() const { return series_.size(); }
  std::size_t series_length() const { return series_.front()->size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Recompute every distance whose template belongs to class `k`.
  void refresh_class(std::size_t k, const BandConstraint& band) {
    const auto& own = members_[k];
    const std::size_t n = size();
    // Pairs inside the class share the band and the permission rule is
    // symmetric, so each is computed once.
    struct Job {
      std::size_t query;
      std::size_t templ;
      bool mirror;
    };
    std::vector<Job> jobs;
    for (std::size_t a = 0; a < own.size(); ++a) {
      for (std::size_t b = a + 1; b < own.size(); ++b) jobs.push_back({own[a], own[b], true});
    }
    for (std::size_t q = 0; q < n; ++q) {
      if (class_of_[q] == k) continue;
      for (std::size_t t : own) jobs.push_back({q, t, false});
    }
    parallel_for(jobs.size(), [&](std::size_t idx) {
      const Job& job = jobs[idx];
      const double d = dtw(*series_[job.query], *series_[job.templ], band, p_).distance;
      dist_[job.query * n + job.templ] = d;
      if (job.mirror) dist_[job.templ * n + job.query] = d;
    });
  }

  HeuristicValue score() const {
    const std::size_t n = size();
    std::size_t correct = 0;
    double separation = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      double nearest = std::numeric_limits<double>::infinity();
      std::size_t nearest_idx = q;
      double nearest_true = std::numeric_limits<double>::infinity();
      double nearest_wrong = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < n; ++t) {
        if (t == q) continue;
        const double d = dist_[q * n + t];
        if (d < nearest) {
          nearest = d;
          nearest_idx = t;
        }
        if (class_of_[t] == class_of_[q]) {
          nearest_true = std::min(nearest_true, d);
        } else {
          nearest_wrong = std::min(nearest_wrong, d);
        }
      }
      if (class_of_[nearest_idx] == class_of_[q]) ++correct;
      separation += nearest_wrong / std::max(nearest_true, kSeparationFloor);
    }
    return {static_cast<double>(correct) / static_cast<double>(n), separation / static_cast<double>(n)};
  }

  std::vector<double> snapshot() const { return dist_; }
  void restore(std::vector<double> saved) { dist_ = std::move(saved); }

 private:
  void validate() const {
    if (labels_.size() < 2) {
      throw Error(ErrorKind::DegenerateClasses,
                  "need at least 2 classes, got " + std::to_string(labels_.size()));
    }
    std::vector<std::size_t> counts(labels_.size(), 0);
    for (std::size_t c : class_of_) ++counts[c];
    for (std::size_t k = 0; k < labels_.size(); ++k) {
      if (counts[k] < 2) {
        throw Error(ErrorKind::DegenerateTrainingSet, "class '" + labels_[k] + "' has fewer than 2 series");
      }
    }
    const std::size_t len = series_.front()->size();
    for (const auto* s : series_) {
      if (s->size() != len) throw Error(ErrorKind::DegenerateTrainingSet, "training series differ in length");
    }
  }

  double p_;
  std::vector<std::string> labels_;
  std::vector<const TimeSeries*> series_;
  std::vector<std::size_t> class_of_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<double> dist_;
};

const BandConstraint& band_for(const ClassBands& bands, const std::string& label, std::size_t len) {
  const auto it = bands.find(label);
  if (it == bands.end()) throw Error(ErrorKind::InvalidArgument, "no band for class '" + label + "'");
  if (it->second.size() != len) {
    throw Error(ErrorKind::LengthMismatch, "band for class '" + label + "' does not match series length");
  }
  return it->second;
}

void validate_config(const LearnConfig& cfg) {
  if (cfg.step < 1) throw Error(ErrorKind::InvalidArgument, "learning step must be >= 1");
  if (cfg.width_floor < 1) throw Error(ErrorKind::InvalidArgument, "segment width floor must be >= 1");
}

}  // namespace

HeuristicValue evaluate(std::span<const LabeledSeries> train, const ClassBands& bands, double p) {
  LooEvaluator eval(train, p);
  const std::size_t len = eval.series_length();
  for (std::size_t k = 0; k < eval.labels().size(); ++k) {
    eval.refresh_class(k, band_for(bands, eval.labels()[k], len));
  }
  return eval.score();
}

LearnResult learn_bands(std::span<const LabeledSeries> train, const LearnConfig& cfg) {
  validate_config(cfg);
  LooEvaluator eval(train, cfg.p);
  const std::size_t len = eval.series_length();
  const std::size_t classes = eval.labels().size();
  const bool forward = cfg.direction == SearchDirection::Forward;
  const int limit = static_cast<int>(len);

  std::vector<std::vector<int>> radii(classes, std::vector<int>(len, forward ? 0 : limit));
  std::vector<std::deque<Segment>> queues(classes);
  std::vector<std::vector<std::uint8_t>> usable(classes);
  for (std::size_t k = 0; k < classes; ++k) {
    queues[k].push_back({1, len});
    const BandConstraint band(radii[k]);
    usable[k] = usable_cells(band);
    eval.refresh_class(k, band);
  }

  LearnResult result;
  result.initial = eval.score();
  result.best = result.initial;
  result.history.push_back(result.initial);

  // Every kept move pushes a radius one step towards its limit, and every
  // rejection shrinks the segment, so this bound is never reached.
  const std::size_t moves_per_radius = static_cast<std::size_t>(limit / cfg.step) + 2;
  const std::size_t attempt_cap = classes * 2 * len * moves_per_radius;

  auto any_pending = [&] {
    return std::any_of(queues.begin(), queues.end(), [](const auto& q) { return !q.empty(); });
  };

  while (any_pending()) {
    for (std::size_t k = 0; k < classes; ++k) {
      if (queues[k].empty()) continue;
      const Segment seg = queues[k].front();
      queues[k].pop_front();

      const std::vector<int> before = radii[k];
      bool adjustable = false;
      for (std::size_t i = seg.start - 1; i < seg.end; ++i) {
        const int moved = std::clamp(radii[k][i] + (forward ? cfg.step : -cfg.step), 0, limit);
        adjustable = adjustable || moved != radii[k][i];
        radii[k][i] = moved;
      }
      if (!adjustable) continue;

      if (++result.attempts > attempt_cap) {
        throw std::logic_error("band learning exceeded its attempt bound");
      }
      const BandConstraint adjusted(radii[k]);
      auto cells = usable_cells(adjusted);
      std::vector<double> saved;
      HeuristicValue value = result.best;
      // A move that adds no usable cell leaves every distance, and hence the
      // score, unchanged; the current state always scores exactly `best`.
      if (cells != usable[k]) {
        saved = eval.snapshot();
        eval.refresh_class(k, adjusted);
        value = eval.score();
      }

      // On a tie the adjusted band is the one the search direction prefers:
      // it is wider in a forward search and tighter in a backward search.
      const bool keep = value >= result.best;
      if (keep) {
        usable[k] = std::move(cells);
        result.best = value;
        result.history.push_back(value);
        queues[k].push_back(seg);
      } else {
        radii[k] = before;
        if (!saved.empty()) eval.restore(std::move(saved));
        if (static_cast<double>(seg.end - seg.start) / 2.0 >= static_cast<double>(cfg.width_floor)) {
          const std::size_t mid = (seg.start + seg.end) / 2;
          queues[k].push_back({seg.start, mid - 1});
          queues[k].push_back({mid, seg.end});
        }
      }
    }
  }

  for (std::size_t k = 0; k < classes; ++k) result.bands.emplace(eval.labels()[k], BandConstraint(radii[k]));
  return result;
}

BandConstraint learn_user_band(std::span<const TimeSeries> own, std::span<const LabeledSeries> others,
                               const LearnConfig& cfg) {
  if (own.size() < 2) throw Error(ErrorKind::DegenerateTrainingSet, "user needs at least 2 series");
  const std::size_t len = own.front().size();
  if (others.size() < 2) {
    const int width = static_cast<int>(std::lround(kFallbackWidthFraction * static_cast<double>(len)));
    return make_sakoe_chiba(len, width);
  }

  // Labels chosen so the user's class sorts first.
  const std::string self = "0:self";
  const std::string rest = "1:rest";
  std::vector<LabeledSeries> train;
  train.reserve(own.size() + others.size());
  for (const auto& s : own) train.emplace_back(s, self);
  for (const auto& o : others) train.emplace_back(o.series, rest);
  return learn_bands(train, cfg).bands.at(self);
}

}  // namespace warpgate
