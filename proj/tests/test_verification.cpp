#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "support.hpp"
#include "warpgate/error.hpp"
#include "warpgate/imageproc.hpp"
#include "warpgate/synthdata.hpp"
#include "warpgate/verification.hpp"

using namespace warpgate;

namespace {

TimeSeries constant(double v, std::size_t n = 50) { return TimeSeries(std::vector<double>(n, v)); }

EnrollConfig zero_band_config() {
  EnrollConfig cfg;
  cfg.mode = BandMode::SakoeChiba;
  cfg.sc_width = 0;
  return cfg;
}

std::vector<LabeledSeries> small_cohort(std::uint64_t seed, int users, int per_user) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<LabeledSeries> out;
  for (int u = 0; u < users; ++u) {
    for (int s = 0; s < per_user; ++s) {
      std::vector<double> v(12);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.5 * i + u) * (1 + 0.2 * u) + noise(rng);
      out.emplace_back(TimeSeries(v), "u" + std::to_string(u));
    }
  }
  return out;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("warpgate_test_" + name);
}

}  // namespace

TEST_CASE("identical templates hit the threshold floor") {
  const std::vector<TimeSeries> s{constant(1.0), constant(1.0)};
  CHECK(enroll("a", s, {}, zero_band_config()).theta == kThetaFloor);
}

TEST_CASE("closed-form threshold and boundary decisions") {
  const std::vector<TimeSeries> s{constant(0.0), constant(1.0)};
  const auto profile = enroll("a", s, {}, zero_band_config());
  CHECK(profile.theta == doctest::Approx(std::sqrt(50.0)).epsilon(1e-12));

  const auto at_edge = verify(profile, constant(2.0), 1.0);
  CHECK(at_edge.distance == doctest::Approx(std::sqrt(50.0)));
  CHECK(at_edge.accept);
  CHECK_FALSE(verify(profile, constant(2.0), 0.99).accept);

  const auto own = verify(profile, constant(1.0), 1e-6);
  CHECK(own.distance == 0.0);
  CHECK(own.accept);

  CHECK_THROWS_AS(verify(profile, constant(1.0, 49), 1.0), Error);
  CHECK_THROWS_AS(verify(profile, constant(1.0), 0.0), Error);
  CHECK_THROWS_AS(enroll("a", std::span(s).first(1), {}), Error);
}

TEST_CASE("mean plus k sigma threshold") {
  const std::vector<TimeSeries> s{constant(0.0, 4), constant(1.0, 4), constant(3.0, 4)};
  EnrollConfig cfg = zero_band_config();
  cfg.rule = ThresholdRule::MeanPlusKSigma;
  cfg.k_sigma = 1.0;
  // Nearest-template distances: 2, 2, 4.
  const double mean = 8.0 / 3.0;
  const double sd = std::sqrt((2 * std::pow(2 - mean, 2) + std::pow(4 - mean, 2)) / 3.0);
  CHECK(enroll("a", s, {}, cfg).theta == doctest::Approx(mean + sd));
}

TEST_CASE("threshold grows with generator noise") {
  int ordered = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    std::vector<double> thetas;
    for (double sigma : {0.01, 0.05, 0.1}) {
      SynthConfig cfg;
      cfg.noise_sigma = sigma;
      cfg.warp_strength = 0.0;
      const auto params = gen_user(seed, cfg);
      std::vector<TimeSeries> s;
      for (std::uint64_t k = 0; k < 4; ++k) s.push_back(extract(to_gray(gen_sample(params, k))));
      thetas.push_back(enroll("u", s, {}).theta);
    }
    ordered += thetas[0] < thetas[1] && thetas[1] < thetas[2];
  }
  CHECK(ordered == 3);
}

TEST_CASE("grid is geometric and inclusive") {
  const auto g = geometric_grid();
  REQUIRE(g.size() == 200);
  CHECK(g.front() == 0.05);
  CHECK(g.back() == 5.0);
  CHECK(g[100] / g[99] == doctest::Approx(g[1] / g[0]));
  CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 10), Error);
}

TEST_CASE("protocol preconditions name the user") {
  auto data = small_cohort(1, 3, 3);
  data.pop_back();
  try {
    check_protocol_dataset(data);
    FAIL("expected ProtocolPrecondition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ProtocolPrecondition);
    CHECK(std::string(e.what()).find("u2") != std::string::npos);
  }
  CHECK_THROWS_AS(check_protocol_dataset(small_cohort(1, 1, 4)), Error);
}

TEST_CASE("sweep counts, limits and monotonicity") {
  const auto data = small_cohort(2, 4, 4);
  EnrollConfig cfg;
  cfg.mode = BandMode::SakoeChiba;
  cfg.sc_width = 2;
  const auto profiles = enroll_all(data, cfg);
  const auto grid = geometric_grid(1e-6, 1e6, 300);
  const auto report = evaluate_protocol(profiles, data, grid, cfg);

  for (const auto& row : report.rows) {
    CHECK(row.genuine_total == 16);
    CHECK(row.imposter_total == 48);
    CHECK(row.tsr == doctest::Approx(100.0 * (1.0 - (row.false_accepts + row.false_rejects) / 64.0)));
  }
  CHECK(report.rows.front().far == 0.0);
  CHECK(report.rows.front().frr == 100.0);
  CHECK(report.rows.back().far == 100.0);
  CHECK(report.rows.back().frr == 0.0);
  for (std::size_t k = 1; k < report.rows.size(); ++k) {
    CHECK(report.rows[k].far >= report.rows[k - 1].far);
    CHECK(report.rows[k].frr <= report.rows[k - 1].frr);
  }
  CHECK(std::abs(report.far_at_eer - report.frr_at_eer) <= 0.5);
  CHECK(report.tsr_at_eer >= std::min(report.rows.front().tsr, report.rows.back().tsr));

  const auto again = evaluate_protocol(profiles, data, grid, cfg);
  CHECK(report_csv(again) == report_csv(report));
}

TEST_CASE("eer is interpolated between bracketing rows") {
  // One genuine trial at ratio 1 and one imposter trial at ratio 2.
  std::vector<TrialOutcome> trials{{"a", "a", true, 1.0, 1.0}, {"a", "b", false, 2.0, 1.0}};
  const std::vector<double> grid{0.5, 1.5, 2.5};
  const auto r = sweep(trials, grid);
  // Row FAR-FRR: -100, 0, 100. The middle row is an exact crossing.
  CHECK(r.eer == 0.0);
  CHECK(r.eer_g == 1.5);

  const std::vector<double> coarse{0.5, 2.5};
  const auto c = sweep(trials, coarse);
  CHECK(c.eer_g == doctest::Approx(1.5));
  CHECK(c.eer == doctest::Approx(50.0));
  CHECK(c.far_at_eer == doctest::Approx(c.frr_at_eer));
}

TEST_CASE("stored templates are accepted by their own profile") {
  const auto data = small_cohort(3, 3, 4);
  for (const auto& p : enroll_all(data)) {
    for (const auto& t : p.templates) CHECK(verify(p, t, 1.0).accept);
    CHECK(p.theta > 0.0);
  }
}

TEST_CASE("profile store round trip") {
  const auto data = small_cohort(4, 3, 4);
  const auto profiles = enroll_all(data);
  const auto path = temp_path("store.json");
  save_profiles(path, profiles);
  const auto back = load_profiles(path);
  REQUIRE(back.size() == profiles.size());
  for (std::size_t u = 0; u < back.size(); ++u) {
    CHECK(back[u].user_id == profiles[u].user_id);
    CHECK(back[u].band == profiles[u].band);
    CHECK(back[u].theta == profiles[u].theta);
    CHECK(back[u].templates == profiles[u].templates);
  }
  std::filesystem::remove(path);
}

TEST_CASE("truncated or malformed stores report the field") {
  const auto text = profiles_to_json(enroll_all(small_cohort(5, 2, 3)));
  CHECK_THROWS_AS(profiles_from_json(text.substr(0, text.size() / 2)), Error);
  try {
    profiles_from_json(R"({"series_len": 3, "users": [{"id": "a", "templates": [[1,2,3],[1,2,4]], "band": {"length": 3, "radii": [0,0,0]}}]})");
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK(std::string(e.what()).find("theta") != std::string::npos);
  }
  CHECK_THROWS_AS(load_profiles(temp_path("does_not_exist.json")), Error);
}

TEST_CASE("a full-size store stays small") {
  std::mt19937_64 rng(6);
  std::vector<UserProfile> profiles;
  for (int u = 0; u < 21; ++u) {
    UserProfile p{"user" + std::to_string(u), {}, wgtest::random_band(rng, 50), 12.345678901234567};
    for (int t = 0; t < 6; ++t) p.templates.push_back(wgtest::random_series(rng, 50, 0.0, 200.0));
    profiles.push_back(std::move(p));
  }
  CHECK(profiles_to_json(profiles).size() < 1024 * 1024);
}
