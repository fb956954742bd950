#include "warpgate/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "warpgate/error.hpp"

namespace warpgate {

namespace {

void check_dims(int width, int height, std::size_t count) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::InvalidArgument, "image dimensions must be positive");
  }
  if (static_cast<std::size_t>(width) * static_cast<std::size_t>(height) != count) {
    throw Error(ErrorKind::InvalidArgument, "pixel count does not match width*height");
  }
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::vector<double> intensities)
    : width_(width), height_(height), pixels_(std::move(intensities)) {
  check_dims(width_, height_, pixels_.size());
  for (double v : pixels_) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::InvalidArgument, "intensity outside [0,1]");
  }
}

GrayImage::GrayImage(int width, int height, double fill)
    : GrayImage(width, height,
                std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), fill)) {}

BinaryImage::BinaryImage(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width_, height_, bits_.size());
  for (auto b : bits_) {
    if (b > 1) throw Error(ErrorKind::InvalidArgument, "binary pixel must be 0 or 1");
  }
}

BinaryImage::BinaryImage(int width, int height)
    : BinaryImage(width, height,
                  std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), 0)) {}

GrayImage to_gray(const BinaryImage& img) {
  std::vector<double> px(img.bits().begin(), img.bits().end());
  return GrayImage(img.width(), img.height(), std::move(px));
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(ErrorKind::Parse, "malformed netpbm header");
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000) throw Error(ErrorKind::Parse, "netpbm header value too large");
      ++pos_;
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(ErrorKind::Parse, "missing whitespace before netpbm raster");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

GrayImage parse_pnm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw Error(ErrorKind::Parse, "unsupported image: only binary PGM (P5) and PPM (P6) are read");
  }
  const bool color = bytes[1] == '6';
  HeaderReader header(bytes);
  const int width = header.next_int();
  const int height = header.next_int();
  const int maxval = header.next_int();
  if (width <= 0 || height <= 0) throw Error(ErrorKind::Parse, "netpbm dimensions must be positive");
  if (maxval <= 0 || maxval > 255) throw Error(ErrorKind::Parse, "only 8-bit netpbm (maxval <= 255) is supported");
  const std::size_t offset = header.raster_offset();
  const std::size_t channels = color ? 3 : 1;
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < offset + count * channels) throw Error(ErrorKind::Parse, "truncated netpbm raster");

  std::vector<double> px(count);
  const auto* raster = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  for (std::size_t i = 0; i < count; ++i) {
    if (color) {
      const double sum = raster[3 * i] + raster[3 * i + 1] + raster[3 * i + 2];
      px[i] = std::min(1.0, sum / 3.0 / maxval);
    } else {
      px[i] = std::min(1.0, static_cast<double>(raster[i]) / maxval);
    }
  }
  return GrayImage(width, height, std::move(px));
}

GrayImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open image " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_pnm(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

namespace {

void write_p5(const std::filesystem::path& path, int width, int height, const std::vector<unsigned char>& raster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write image " + path.string());
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace

void write_pgm(const std::filesystem::path& path, const BinaryImage& img) {
  std::vector<unsigned char> raster(img.bits().size());
  for (std::size_t i = 0; i < raster.size(); ++i) raster[i] = img.bits()[i] ? 255 : 0;
  write_p5(path, img.width(), img.height(), raster);
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::vector<unsigned char> raster(img.pixels().size());
  for (std::size_t i = 0; i < raster.size(); ++i) {
    raster[i] = static_cast<unsigned char>(std::lround(img.pixels()[i] * 255.0));
  }
  write_p5(path, img.width(), img.height(), raster);
}

}  // namespace warpgate
