#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "warpgate/dtw.hpp"
#include "warpgate/series.hpp"

namespace warpgate {

enum class SearchDirection {
  Forward,   ///< start from the zero band and widen
  Backward,  ///< start from the full band and narrow
};

/// 1-based inclusive index range of a band's radii.
struct Segment {
  std::size_t start = 1;
  std::size_t end = 1;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct LearnConfig {
  SearchDirection direction = SearchDirection::Forward;
  int step = 1;         ///< radius change per hill-climbing move
  int width_floor = 1;  ///< a rejected segment is split while (end - start) / 2 >= width_floor
  double p = kDefaultRootExponent;
};

/// Training-set score of a band assignment, ordered lexicographically:
/// leave-one-out 1-NN accuracy first, then the separation ratio.
struct HeuristicValue {
  double accuracy = 0.0;
  double separation = 0.0;
  friend auto operator<=>(const HeuristicValue&, const HeuristicValue&) = default;
  friend bool operator==(const HeuristicValue&, const HeuristicValue&) = default;
};

/// One band per class label.
using ClassBands = std::map<std::string, BandConstraint>;

/// Leave-one-out 1-NN over `train`. The distance from a query to a template
/// of class k is DTW under bands.at(k). Ties go to the first template in
/// (label, input order). Separation is the mean over queries of
/// nearest-wrong-class distance / nearest-true-class distance, with the
/// denominator floored at 1e-12.
///
/// Requires >= 2 classes, >= 2 series per class, equal lengths, and a band
/// of that length for every class.
HeuristicValue evaluate(std::span<const LabeledSeries> train, const ClassBands& bands,
                        double p = kDefaultRootExponent);

struct LearnResult {
  ClassBands bands;
  HeuristicValue initial;
  HeuristicValue best;
  /// Heuristic value after each kept adjustment, starting with `initial`.
  std::vector<HeuristicValue> history;
  /// Number of adjustments that were evaluated.
  std::size_t attempts = 0;
};

/// Multi-class R-K band learning by queue-driven hill climbing. Each class
/// owns a FIFO of segments seeded with the whole band; classes are served
/// round-robin. A dequeued segment has its radii moved by one step (wider
/// for forward search, tighter for backward). The move is kept and the
/// segment re-queued when the heuristic does not get worse: a strictly
/// better value always wins, and on an exact tie the adjusted band is the
/// one the direction prefers (wider going forward, tighter going backward).
/// Otherwise the move is undone and the segment is split at
/// mid = floor((start + end) / 2) into [start, mid-1] and [mid, end].
/// A segment whose radii are already at the limit is dropped.
LearnResult learn_bands(std::span<const LabeledSeries> train, const LearnConfig& cfg = {});

/// Fraction of the series length used when a user band cannot be learned.
inline constexpr double kFallbackWidthFraction = 0.10;

/// Band for one user, learned as the two-class problem {own} vs {everyone
/// else}. Falls back to a Sakoe-Chiba band of 10% of the length when fewer
/// than 2 other series exist.
BandConstraint learn_user_band(std::span<const TimeSeries> own, std::span<const LabeledSeries> others,
                               const LearnConfig& cfg = {});

}  // namespace warpgate
