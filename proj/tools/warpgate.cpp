// warpgate: hand-silhouette verification with learned DTW bands.
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "warpgate/band_io.hpp"
#include "warpgate/band_learning.hpp"
#include "warpgate/dtw.hpp"
#include "warpgate/error.hpp"
#include "warpgate/format.hpp"
#include "warpgate/imageproc.hpp"
#include "warpgate/synthdata.hpp"
#include "warpgate/verification.hpp"

namespace fs = std::filesystem;
using namespace warpgate;

namespace {

constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct LearnFlags {
  std::string direction = "forward";
  int step = 1;
  int floor = 1;
  double p = kDefaultRootExponent;

  void attach(CLI::App& cmd) {
    cmd.add_option("--direction", direction, "Band search direction")
        ->check(CLI::IsMember({"forward", "backward"}))
        ->capture_default_str();
    cmd.add_option("--step", step, "Radius change per hill-climbing move")->check(CLI::PositiveNumber)->capture_default_str();
    cmd.add_option("--floor", floor, "Minimum segment half-width that is still subdivided")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--p", p, "Root exponent applied to the accumulated squared cost")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  LearnConfig config() const {
    return {direction == "backward" ? SearchDirection::Backward : SearchDirection::Forward, step, floor, p};
  }
};

struct EnrollFlags {
  std::string mode = "rk";
  int width = 5;
  std::string rule = "loo-max";
  double k_sigma = 2.0;
  LearnFlags learn;

  void attach(CLI::App& cmd) {
    cmd.add_option("--mode", mode, "rk: per-user learned band; sc: fixed Sakoe-Chiba band")
        ->check(CLI::IsMember({"rk", "sc"}))
        ->capture_default_str();
    cmd.add_option("--width", width, "Sakoe-Chiba width for --mode sc")->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd.add_option("--rule", rule, "Individual threshold rule")
        ->check(CLI::IsMember({"loo-max", "mean-ksigma"}))
        ->capture_default_str();
    cmd.add_option("--k", k_sigma, "k for --rule mean-ksigma")->capture_default_str();
    learn.attach(cmd);
  }

  EnrollConfig config() const {
    EnrollConfig cfg;
    cfg.mode = mode == "sc" ? BandMode::SakoeChiba : BandMode::LearnedRk;
    cfg.sc_width = width;
    cfg.rule = rule == "mean-ksigma" ? ThresholdRule::MeanPlusKSigma : ThresholdRule::LooMax;
    cfg.k_sigma = k_sigma;
    cfg.learn = learn.config();
    return cfg;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

struct ManifestEntry {
  fs::path path;
  std::string label;
};

std::vector<ManifestEntry> read_manifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorKind::Io, "cannot open manifest " + manifest.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line == "path,label")) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == line.size()) {
      throw Error(ErrorKind::Parse, manifest.string() + ":" + std::to_string(line_no) + ": expected path,label");
    }
    fs::path p = line.substr(0, comma);
    if (p.is_relative()) p = manifest.parent_path() / p;
    entries.push_back({p, line.substr(comma + 1)});
  }
  return entries;
}

int cmd_synth(int users, int samples, std::uint64_t seed, const SynthConfig& cfg, const fs::path& out) {
  fs::create_directories(out);
  const auto cohort = gen_cohort(users, samples, seed, cfg);
  std::string manifest = "path,label\n";
  std::map<std::string, int> counter;
  for (const auto& item : cohort) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_s%02d.pgm", item.label.c_str(), counter[item.label]++);
    write_pgm(out / name, item.image);
    manifest += std::string(name) + "," + item.label + "\n";
  }
  write_text(out / "manifest.csv", manifest);
  std::cout << "wrote " << cohort.size() << " images to " << out.string() << "\n";
  return 0;
}

int cmd_convert(const fs::path& manifest, const ExtractConfig& cfg, const fs::path& out) {
  const auto entries = read_manifest(manifest);
  std::vector<LabeledSeries> rows;
  std::vector<std::string> failures;
  for (const auto& e : entries) {
    try {
      rows.emplace_back(extract(read_pnm(e.path), cfg), e.label);
    } catch (const Error& err) {
      failures.push_back(e.path.string() + ": " + err.what());
    }
  }
  write_series_csv(out, rows);
  for (const auto& f : failures) std::cerr << "error: " << f << "\n";
  std::cout << "converted " << rows.size() << " of " << entries.size() << " images\n";
  return failures.empty() ? 0 : kDataError;
}

const LabeledSeries& row_at(const std::vector<LabeledSeries>& rows, std::size_t idx, const char* which) {
  if (idx >= rows.size()) {
    throw Error(ErrorKind::InvalidArgument, std::string(which) + " row " + std::to_string(idx) + " out of range (" +
                                                std::to_string(rows.size()) + " rows)");
  }
  return rows[idx];
}

int cmd_dist(const fs::path& input, std::size_t a, std::size_t b, const std::string& band_path, int width, double p) {
  const auto rows = read_series_csv(input);
  const auto& q = row_at(rows, a, "--a").series;
  const auto& c = row_at(rows, b, "--b").series;
  BandConstraint band = !band_path.empty() ? read_band(band_path)
                        : width >= 0       ? make_sakoe_chiba(q.size(), width)
                                           : make_sakoe_chiba(q.size(), static_cast<int>(q.size()));
  std::cout << fixed6(dtw(q, c, band, p).distance) << "\n";
  return 0;
}

int cmd_learn(const fs::path& train_path, const LearnConfig& cfg, const std::string& user, const fs::path& out) {
  const auto train = read_series_csv(train_path);
  if (!user.empty()) {
    std::vector<TimeSeries> own;
    std::vector<LabeledSeries> others;
    for (const auto& row : train) {
      if (row.label == user) {
        own.push_back(row.series);
      } else {
        others.push_back(row);
      }
    }
    if (own.empty()) throw Error(ErrorKind::InvalidArgument, "no series labelled '" + user + "'");
    write_band(out, learn_user_band(own, others, cfg));
  } else {
    const auto result = learn_bands(train, cfg);
    write_text(out, class_bands_to_json(result.bands));
    std::cout << "accuracy " << fixed6(result.initial.accuracy) << " -> " << fixed6(result.best.accuracy) << " after "
              << result.attempts << " adjustments\n";
  }
  return 0;
}

int cmd_enroll(const fs::path& train_path, const EnrollConfig& cfg, const fs::path& out) {
  const auto train = read_series_csv(train_path);
  const auto profiles = enroll_all(train, cfg);
  save_profiles(out, profiles);
  for (const auto& p : profiles) std::cout << p.user_id << " theta=" << fixed6(p.theta) << "\n";
  return 0;
}

int cmd_verify(const fs::path& profiles_path, const fs::path& probes_path, double g, double p) {
  const auto profiles = load_profiles(profiles_path);
  std::map<std::string, const UserProfile*> by_id;
  for (const auto& prof : profiles) by_id[prof.user_id] = &prof;
  const auto probes = read_series_csv(probes_path);
  std::cout << "claimed,decision,distance,threshold\n";
  int status = 0;
  for (const auto& probe : probes) {
    const auto it = by_id.find(probe.label);
    if (it == by_id.end()) {
      std::cerr << "error: no profile for claimed id '" << probe.label << "'\n";
      status = kDataError;
      continue;
    }
    const Decision d = verify(*it->second, probe.series, g, p);
    std::cout << probe.label << ',' << (d.accept ? "accept" : "reject") << ',' << fixed6(d.distance) << ','
              << fixed6(it->second->theta * g) << "\n";
  }
  return status;
}

int cmd_evaluate(const fs::path& input, const EnrollConfig& cfg, double g_min, double g_max, std::size_t g_count,
                 const fs::path& out) {
  const auto dataset = read_series_csv(input);
  check_protocol_dataset(dataset);
  const auto grid = geometric_grid(g_min, g_max, g_count);
  const auto profiles = enroll_all(dataset, cfg);
  const auto report = evaluate_protocol(profiles, dataset, grid, cfg);
  fs::create_directories(out);
  write_text(out / "report.csv", report_csv(report));
  write_text(out / "summary.json", report_summary_json(report));
  write_text(out / "roc.csv", roc_csv(report));
  std::cout << "EER " << fixed6(report.eer) << "% at G=" << fixed6(report.eer_g) << ", TSR at EER "
            << fixed6(report.tsr_at_eer) << "%\n";
  return 0;
}

int cmd_roc(const fs::path& report_path, const fs::path& out) {
  std::ifstream in(report_path);
  if (!in) throw Error(ErrorKind::Io, "cannot open report " + report_path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("G,far,frr", 0) != 0) {
    throw Error(ErrorKind::Parse, report_path.string() + ": expected header G,far,frr,tsr,fa,fr");
  }
  std::string text = "G,far,frr\n";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string g, far, frr;
    if (!std::getline(fields, g, ',') || !std::getline(fields, far, ',') || !std::getline(fields, frr, ',')) {
      throw Error(ErrorKind::Parse, report_path.string() + ": malformed row '" + line + "'");
    }
    text += g + "," + far + "," + frr + "\n";
  }
  write_text(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hand-geometry verification with learned DTW warping bands"};
  app.require_subcommand(1);

  // synth
  int users = 10, samples = 6;
  std::uint64_t seed = 7;
  SynthConfig synth_cfg;
  fs::path synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic hand cohort (PGM images + manifest.csv)");
  synth->add_option("--users", users, "Number of users")->check(CLI::Range(2, 1000))->capture_default_str();
  synth->add_option("--samples", samples, "Images per user")->check(CLI::Range(3, 1000))->capture_default_str();
  synth->add_option("--seed", seed, "Cohort seed")->capture_default_str();
  synth->add_option("--size", synth_cfg.size, "Raster side in pixels")->check(CLI::Range(64, 4096))->capture_default_str();
  synth->add_option("--noise", synth_cfg.noise_sigma, "Boundary jitter relative to palm radius")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth->add_option("--warp", synth_cfg.warp_strength, "Angular warp strength in [0,1)")
      ->check(CLI::Range(0.0, 0.999))
      ->capture_default_str();
  synth->add_option("--spread", synth_cfg.spread, "Inter-user parameter spread")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth->add_option("--out", synth_out, "Output directory")->required();

  // convert
  fs::path manifest, convert_out;
  ExtractConfig extract_cfg;
  std::string technique = "centroid";
  auto* convert = app.add_subcommand("convert", "Convert manifest images to a series CSV");
  convert->add_option("--manifest", manifest, "CSV of path,label")->required()->check(CLI::ExistingFile);
  convert->add_option("--out", convert_out, "Output series CSV")->required();
  convert->add_option("--technique", technique, "Contour-to-series conversion")
      ->check(CLI::IsMember({"angle", "centroid"}))
      ->capture_default_str();
  convert->add_option("--threshold", extract_cfg.threshold, "Binarization threshold t")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  convert->add_option("--delta", extract_cfg.delta, "Tangent offset for the angle technique")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  convert->add_option("--len", extract_cfg.target_len, "Resampled series length")->check(CLI::Range(2, 100000))->capture_default_str();
  convert->add_option("--low-pct", extract_cfg.low_pct, "Contrast stretch low percentile")->check(CLI::Range(0.0, 100.0))->capture_default_str();
  convert->add_option("--high-pct", extract_cfg.high_pct, "Contrast stretch high percentile")->check(CLI::Range(0.0, 100.0))->capture_default_str();
  convert->add_flag("--invert", extract_cfg.invert, "Treat dark pixels as foreground");
  convert->add_flag("--znorm", extract_cfg.znormalize, "Z-normalise each series");

  // dist
  fs::path dist_input;
  std::size_t dist_a = 0, dist_b = 1;
  std::string dist_band;
  int dist_width = -1;
  double dist_p = kDefaultRootExponent;
  auto* dist = app.add_subcommand("dist", "DTW distance between two rows of a series CSV");
  dist->add_option("--input", dist_input, "Series CSV")->required()->check(CLI::ExistingFile);
  dist->add_option("--a", dist_a, "First row (0-based)")->capture_default_str();
  dist->add_option("--b", dist_b, "Second row (0-based)")->capture_default_str();
  auto* band_opt = dist->add_option("--band", dist_band, "Band JSON file (default: unconstrained)");
  dist->add_option("--width", dist_width, "Sakoe-Chiba width instead of a band file")->excludes(band_opt);
  dist->add_option("--p", dist_p, "Root exponent")->check(CLI::PositiveNumber)->capture_default_str();

  // learn
  fs::path learn_train, learn_out;
  std::string learn_user;
  LearnFlags learn_flags;
  auto* learn = app.add_subcommand("learn", "Learn R-K bands from a labelled series CSV");
  learn->add_option("--train", learn_train, "Training series CSV")->required()->check(CLI::ExistingFile);
  learn->add_option("--out", learn_out, "Output band JSON")->required();
  learn->add_option("--user", learn_user, "Learn one user-vs-rest band for this label");
  learn_flags.attach(*learn);

  // enroll
  fs::path enroll_train, enroll_out;
  EnrollFlags enroll_flags;
  auto* enroll_cmd = app.add_subcommand("enroll", "Enroll every user in a series CSV into a profile store");
  enroll_cmd->add_option("--train", enroll_train, "Enrollment series CSV")->required()->check(CLI::ExistingFile);
  enroll_cmd->add_option("--out", enroll_out, "Output profile store JSON")->required();
  enroll_flags.attach(*enroll_cmd);

  // verify
  fs::path verify_profiles, verify_probes;
  double verify_g = 1.0, verify_p = kDefaultRootExponent;
  auto* verify_cmd = app.add_subcommand("verify", "Verify probe series against their claimed profiles");
  verify_cmd->add_option("--profiles", verify_profiles, "Profile store JSON")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--probes", verify_probes, "Series CSV; the label is the claimed id")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--g", verify_g, "Global threshold multiplier")->check(CLI::PositiveNumber)->capture_default_str();
  verify_cmd->add_option("--p", verify_p, "Root exponent")->check(CLI::PositiveNumber)->capture_default_str();

  // evaluate
  fs::path eval_input, eval_out;
  EnrollFlags eval_flags;
  double g_min = 0.05, g_max = 5.0;
  std::size_t g_count = 200;
  auto* evaluate = app.add_subcommand("evaluate", "Leave-one-out FAR/FRR/TSR sweep and EER");
  evaluate->add_option("--input", eval_input, "Series CSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", eval_out, "Output directory for report.csv, summary.json, roc.csv")->required();
  evaluate->add_option("--g-min", g_min, "Smallest global threshold")->check(CLI::PositiveNumber)->capture_default_str();
  evaluate->add_option("--g-max", g_max, "Largest global threshold")->check(CLI::PositiveNumber)->capture_default_str();
  evaluate->add_option("--g-count", g_count, "Geometric grid size")->check(CLI::Range(2, 100000))->capture_default_str();
  eval_flags.attach(*evaluate);

  // roc
  fs::path roc_report, roc_out;
  auto* roc = app.add_subcommand("roc", "Extract ROC points (FAR vs FRR per G) from a report CSV");
  roc->add_option("--report", roc_report, "report.csv from evaluate")->required()->check(CLI::ExistingFile);
  roc->add_option("--out", roc_out, "Output ROC CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*synth) return cmd_synth(users, samples, seed, synth_cfg, synth_out);
    if (*convert) {
      extract_cfg.technique = technique == "angle" ? Technique::Angle : Technique::Centroid;
      return cmd_convert(manifest, extract_cfg, convert_out);
    }
    if (*dist) return cmd_dist(dist_input, dist_a, dist_b, dist_band, dist_width, dist_p);
    if (*learn) return cmd_learn(learn_train, learn_flags.config(), learn_user, learn_out);
    if (*enroll_cmd) return cmd_enroll(enroll_train, enroll_flags.config(), enroll_out);
    if (*verify_cmd) return cmd_verify(verify_profiles, verify_probes, verify_g, verify_p);
    if (*evaluate) return cmd_evaluate(eval_input, eval_flags.config(), g_min, g_max, g_count, eval_out);
    if (*roc) return cmd_roc(roc_report, roc_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}
