// End-to-end acceptance checks. Prints one PASS/FAIL line per check and
// exits non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "warpgate/band_learning.hpp"
#include "warpgate/dtw.hpp"
#include "warpgate/imageproc.hpp"
#include "warpgate/synthdata.hpp"
#include "warpgate/verification.hpp"

using namespace warpgate;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%d] %-28s %s  %s\n", id, name.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void dtw_vs_enumeration() {
  std::mt19937_64 rng(1001);
  const auto t0 = Clock::now();
  int bad = 0, cases = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 2 + rng() % 5;
    const auto q = wgtest::random_int_series(rng, n, 0, 3);
    const auto c = wgtest::random_int_series(rng, n, 0, 3);
    for (const auto& band : {wgtest::zero_band(n), wgtest::full_band(n), wgtest::random_band(rng, n)}) {
      const auto fast = dtw(q, c, band);
      const auto slow = dtw_oracle(q, c, band);
      ++cases;
      if (fast.cost != slow.cost || !wgtest::rel_close(fast.distance, slow.distance, 1e-12)) ++bad;
    }
  }
  const double secs = seconds_since(t0);
  report(1, "dtw equals enumeration", bad == 0 && secs < 10.0,
         fmt("%.0f cases, %.0f mismatches, %.2f s", cases, bad, secs));
}

void limiting_bands() {
  std::mt19937_64 rng(1002);
  int bad = 0;
  for (int k = 0; k < 200; ++k) {
    const auto q = wgtest::random_series(rng, 50, -3.0, 3.0);
    const auto c = wgtest::random_series(rng, 50, -3.0, 3.0);
    const double diag = wgtest::diagonal_cost(q, c), free = wgtest::unconstrained_cost(q, c);
    const auto z = dtw(q, c, wgtest::zero_band(50)), f = dtw(q, c, wgtest::full_band(50));
    if (!wgtest::rel_close(z.cost, diag, 1e-9) || !wgtest::rel_close(z.distance, std::sqrt(diag), 1e-9)) ++bad;
    if (!wgtest::rel_close(f.cost, free, 1e-9) || !wgtest::rel_close(f.distance, std::sqrt(free), 1e-9)) ++bad;
  }
  report(2, "zero and full band limits", bad == 0, fmt("200 pairs, %.0f mismatches", bad));
}

void nested_bands() {
  std::mt19937_64 rng(1003);
  const auto t0 = Clock::now();
  int bad = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + rng() % 49;
    const auto q = wgtest::random_series(rng, n, 0.0, 5.0);
    const auto c = wgtest::random_series(rng, n, 0.0, 5.0);
    const auto wide = wgtest::random_band(rng, n);
    std::vector<int> tight(wide.radii().begin(), wide.radii().end());
    for (auto& r : tight) r = static_cast<int>(rng() % (r + 1));
    if (!(dtw(q, c, wide).distance <= dtw(q, c, BandConstraint(tight)).distance)) ++bad;
  }
  const double secs = seconds_since(t0);
  report(3, "wider band never farther", bad == 0 && secs < 5.0, fmt("200 triples, %.0f violations, %.2f s", bad, secs));
}

void geometry() {
  const auto d = wgtest::disk(64, 32, 32, 20);
  const auto ds = centroid_series(d, trace_boundary(d));
  double lo = 1e300, hi = -1e300;
  for (double v : ds.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const bool disk_ok = lo >= 18.5 && hi <= 20.5;

  const auto sq = trace_boundary(wgtest::rect(10, 10, 3, 3, 4, 4));
  const bool square_ok = sq.size() == 12;

  std::mt19937_64 rng(1004);
  int moved_bad = 0;
  for (int k = 0; k < 20; ++k) {
    const auto base = wgtest::random_blob(rng, 40);
    const int dx = 1 + static_cast<int>(rng() % 50), dy = 1 + static_cast<int>(rng() % 50);
    const auto moved = wgtest::shifted(base, dx, dy, 100, 100);
    const auto ca = trace_boundary(base), cb = trace_boundary(moved);
    if (!(centroid_series(base, ca) == centroid_series(moved, cb))) ++moved_bad;
    if (!(angle_series(ca) == angle_series(cb))) ++moved_bad;
  }
  report(4, "geometry pipeline", disk_ok && square_ok && moved_bad == 0,
         fmt("disk range [%.3f, %.3f], square %.0f points, %.0f translation mismatches", lo, hi,
             static_cast<double>(sq.size()), moved_bad));
}

void learner() {
  const auto data = wgtest::warped_pair_dataset(1005);
  const double baseline = wgtest::euclidean_loo_accuracy(data);
  LearnConfig cfg;
  cfg.direction = SearchDirection::Forward;
  cfg.step = 1;
  cfg.width_floor = 1;
  const auto t0 = Clock::now();
  const auto result = learn_bands(data, cfg);
  const double secs = seconds_since(t0);
  const double learned = evaluate(data, result.bands).accuracy;
  bool monotone = true;
  for (std::size_t k = 1; k < result.history.size(); ++k) monotone = monotone && result.history[k - 1] <= result.history[k];
  report(5, "learner soundness", learned >= baseline && monotone && secs < 60.0,
         fmt("accuracy %.3f vs euclidean %.3f, %.1f s, history", learned, baseline, secs) +
             (monotone ? " (non-decreasing)" : " (DECREASES)"));
}

// Series for a synthetic cohort, passed through the six-decimal CSV form the
// command-line tool writes.
std::vector<LabeledSeries> cohort_series(std::uint64_t seed, Technique technique) {
  ExtractConfig cfg;
  cfg.technique = technique;
  std::vector<LabeledSeries> rows;
  for (const auto& item : gen_cohort(10, 6, seed)) rows.emplace_back(extract(to_gray(item.image), cfg), item.label);
  return parse_series_csv(format_series_csv(rows));
}

struct Run {
  EvalReport report;
  double seconds = 0.0;
};

Run run(const std::vector<LabeledSeries>& data, BandMode mode, double extract_seconds) {
  EnrollConfig cfg;
  cfg.mode = mode;
  cfg.sc_width = 5;
  const auto t0 = Clock::now();
  const auto grid = geometric_grid();
  const auto profiles = enroll_all(data, cfg);
  Run r{evaluate_protocol(profiles, data, grid, cfg), 0.0};
  r.seconds = seconds_since(t0) + extract_seconds;
  return r;
}

struct SweepCheck {
  bool ok = true;
  std::string why;
};

void check_sweep(const EvalReport& rep, const std::string& name, SweepCheck& out) {
  auto fail = [&](const std::string& what) {
    out.ok = false;
    if (out.why.size() < 400) out.why += " " + name + ": " + what + ";";
  };
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    if (rep.rows[k].far < rep.rows[k - 1].far) fail("FAR decreases");
    if (rep.rows[k].frr > rep.rows[k - 1].frr) fail("FRR increases");
  }
  const auto& lo = rep.rows.front();
  const auto& hi = rep.rows.back();
  if (lo.far != 0.0 || lo.frr != 100.0) fail(fmt("G=%.2f gives FAR %.2f FRR %.2f", lo.g, lo.far, lo.frr));
  if (hi.far != 100.0 || hi.frr != 0.0) fail(fmt("G=%.2f gives FAR %.2f FRR %.2f", hi.g, hi.far, hi.frr));
  if (std::abs(rep.far_at_eer - rep.frr_at_eer) > 0.5) fail(fmt("bracket gap %.3f", std::abs(rep.far_at_eer - rep.frr_at_eer)));
}

void cohorts() {
  const std::uint64_t seeds[] = {7, 11, 23};
  bool learned_wins = true, within_time = true;
  int centroid_wins = 0;
  std::string detail6, detail7;
  SweepCheck sweeps;
  for (std::uint64_t seed : seeds) {
    auto t0 = Clock::now();
    const auto centroid = cohort_series(seed, Technique::Centroid);
    const double centroid_secs = seconds_since(t0);
    t0 = Clock::now();
    const auto angle = cohort_series(seed, Technique::Angle);
    const double angle_secs = seconds_since(t0);

    const auto sc = run(centroid, BandMode::SakoeChiba, centroid_secs);
    const auto rk = run(centroid, BandMode::LearnedRk, centroid_secs);
    const auto angle_rk = run(angle, BandMode::LearnedRk, angle_secs);
    const auto angle_sc = run(angle, BandMode::SakoeChiba, angle_secs);

    const bool wins = rk.report.eer <= sc.report.eer && rk.report.tsr_at_eer >= sc.report.tsr_at_eer;
    learned_wins = learned_wins && wins;
    within_time = within_time && rk.seconds < 600.0 && sc.seconds < 600.0;
    detail6 += fmt(" seed %.0f: rk EER %.2f TSR %.2f vs sc5 EER %.2f", static_cast<double>(seed), rk.report.eer,
                   rk.report.tsr_at_eer, sc.report.eer) +
               fmt(" TSR %.2f (%.0f s)", sc.report.tsr_at_eer, rk.seconds) + (wins ? ";" : " <- loses;");

    const bool centroid_better = rk.report.eer <= angle_rk.report.eer;
    centroid_wins += centroid_better ? 1 : 0;
    detail7 += fmt(" seed %.0f: centroid %.2f vs angle %.2f (sc5: %.2f vs", static_cast<double>(seed), rk.report.eer,
                   angle_rk.report.eer, sc.report.eer) +
               fmt(" %.2f);", angle_sc.report.eer);

    const std::string tag = "seed " + std::to_string(seed);
    check_sweep(sc.report, tag + " centroid sc5", sweeps);
    check_sweep(rk.report, tag + " centroid rk", sweeps);
    check_sweep(angle_rk.report, tag + " angle rk", sweeps);
    check_sweep(angle_sc.report, tag + " angle sc5", sweeps);
  }
  report(6, "learned bands beat sc5", learned_wins && within_time, detail6);
  report(7, "centroid beats angle", centroid_wins >= 2, fmt("%.0f of 3 seeds;", centroid_wins) + detail7);
  report(8, "sweep sanity", sweeps.ok, sweeps.ok ? "12 sweeps monotone, limits exact, bracket gap <= 0.5" : sweeps.why);
}

void persistence() {
  std::mt19937_64 rng(1009);
  std::vector<UserProfile> profiles;
  for (int u = 0; u < 21; ++u) {
    UserProfile p{"user" + std::to_string(u), {}, wgtest::random_band(rng, 50), std::uniform_real_distribution<>(1, 100)(rng)};
    for (int t = 0; t < 6; ++t) p.templates.push_back(wgtest::random_series(rng, 50, 0.0, 250.0));
    profiles.push_back(std::move(p));
  }
  const auto text = profiles_to_json(profiles);
  const auto back = profiles_from_json(text);
  bool same = back.size() == profiles.size();
  for (std::size_t u = 0; same && u < back.size(); ++u) {
    same = back[u].user_id == profiles[u].user_id && back[u].band == profiles[u].band &&
           wgtest::rel_close(back[u].theta, profiles[u].theta, 1e-12) &&
           back[u].templates.size() == profiles[u].templates.size();
    for (std::size_t t = 0; same && t < back[u].templates.size(); ++t) {
      for (std::size_t i = 0; same && i < 50; ++i) {
        same = wgtest::rel_close(back[u].templates[t][i], profiles[u].templates[t][i], 1e-12);
      }
    }
  }
  report(9, "profile store", same && text.size() < 1024 * 1024,
         fmt("%.0f bytes for 21 users x 6 templates, round trip", static_cast<double>(text.size())) +
             (same ? " (lossless)" : " (LOSSY)"));
}

}  // namespace

int main() {
  dtw_vs_enumeration();
  limiting_bands();
  nested_bands();
  geometry();
  learner();
  cohorts();
  persistence();
  std::printf("%d failing\n", failures);
  return failures == 0 ? 0 : 1;
}
