#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace warpgate {

/// Row-major grayscale raster, intensities in [0,1].
class GrayImage {
 public:
  GrayImage(int width, int height, std::vector<double> intensities);
  GrayImage(int width, int height, double fill);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double at(int x, int y) const noexcept { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  const std::vector<double>& pixels() const noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_;
  int height_;
  std::vector<double> pixels_;
};

/// Row-major {0,1} raster; 1 is foreground.
class BinaryImage {
 public:
  BinaryImage(int width, int height, std::vector<std::uint8_t> bits);
  BinaryImage(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  /// Out-of-range coordinates read as background.
  bool at(int x, int y) const noexcept {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return false;
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool on) { bits_.at(static_cast<std::size_t>(y) * width_ + x) = on ? 1 : 0; }

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

GrayImage to_gray(const BinaryImage& img);

// Netpbm: P5 (8-bit gray) and P6 (8-bit RGB, averaged to gray). Intensities
// are divided by maxval.
GrayImage read_pnm(const std::filesystem::path& path);
GrayImage parse_pnm(const std::string& bytes);
void write_pgm(const std::filesystem::path& path, const BinaryImage& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

}  // namespace warpgate
