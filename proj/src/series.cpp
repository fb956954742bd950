#include "warpgate/series.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "warpgate/error.hpp"
#include "warpgate/format.hpp"

namespace warpgate {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw Error(ErrorKind::InvalidArgument,
                "time series needs at least 2 points, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorKind::NonFiniteValue, "value at index " + std::to_string(i) + " is not finite");
    }
  }
}

BandConstraint::BandConstraint(std::vector<int> radii) : radii_(std::move(radii)) {
  if (radii_.empty()) throw Error(ErrorKind::InvalidArgument, "band must have at least one radius");
  const int n = static_cast<int>(radii_.size());
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (radii_[i] < 0 || radii_[i] > n) {
      throw Error(ErrorKind::InvalidArgument, "radius " + std::to_string(radii_[i]) + " at index " +
                                                  std::to_string(i) + " outside [0, " +
                                                  std::to_string(n) + "]");
    }
  }
}

long long BandConstraint::area() const noexcept {
  return std::accumulate(radii_.begin(), radii_.end(), 0LL);
}

bool BandConstraint::within(const BandConstraint& other) const {
  if (other.size() != size()) {
    throw Error(ErrorKind::LengthMismatch, "bands of different length cannot be compared");
  }
  // Cell permission is monotone in every radius, so pointwise <= suffices.
  for (std::size_t i = 0; i < size(); ++i) {
    if (radii_[i] > other.radii_[i]) return false;
  }
  return true;
}

LabeledSeries::LabeledSeries(TimeSeries s, std::string l) : series(std::move(s)), label(std::move(l)) {
  if (label.empty()) throw Error(ErrorKind::InvalidArgument, "series label must be non-empty");
}

TimeSeries resample(const TimeSeries& series, std::size_t target_len) {
  if (target_len < 2) {
    throw Error(ErrorKind::InvalidArgument, "resample target length must be >= 2");
  }
  const auto src = series.values();
  const std::size_t n = src.size();
  if (n == target_len) return series;

  std::vector<double> out(target_len);
  for (std::size_t k = 0; k < target_len; ++k) {
    // k*(n-1) is an exact integer, so integer parameters land exactly.
    const double pos = static_cast<double>(k * (n - 1)) / static_cast<double>(target_len - 1);
    auto idx = static_cast<std::size_t>(std::floor(pos));
    if (idx >= n - 1) {
      out[k] = src[n - 1];
      continue;
    }
    const double t = pos - static_cast<double>(idx);
    const double a = src[idx];
    const double b = src[idx + 1];
    out[k] = std::clamp(a + t * (b - a), std::min(a, b), std::max(a, b));
  }
  return TimeSeries(std::move(out));
}

BandConstraint make_sakoe_chiba(std::size_t n, int width) {
  if (width < 0 || static_cast<std::size_t>(width) > n) {
    throw Error(ErrorKind::InvalidArgument,
                "Sakoe-Chiba width " + std::to_string(width) + " outside [0, " + std::to_string(n) + "]");
  }
  return BandConstraint(std::vector<int>(n, width));
}

TimeSeries znormalize(const TimeSeries& series) {
  const auto v = series.values();
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / n);
  std::vector<double> out(v.size(), 0.0);
  if (sd > 0.0) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
  }
  return TimeSeries(std::move(out));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": cannot parse number '" +
                                      std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::vector<LabeledSeries> parse_series_csv(const std::string& text) {
  std::vector<LabeledSeries> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
      const auto comma = view.find(',', pos);
      fields.push_back(view.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (fields.size() < 3) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected label and >= 2 values");
    }
    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) values.push_back(parse_double(fields[i], line_no));
    try {
      rows.emplace_back(TimeSeries(std::move(values)), std::string(trim(fields[0])));
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
  return rows;
}

std::vector<LabeledSeries> read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open series file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_series_csv(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

std::string format_series_csv(std::span<const LabeledSeries> rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.label;
    for (double v : row.series.values()) {
      out += ',';
      out += fixed6(v);
    }
    out += '\n';
  }
  return out;
}

void write_series_csv(const std::filesystem::path& path, std::span<const LabeledSeries> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write series file " + path.string());
  out << format_series_csv(rows);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace warpgate
