#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ipf {

/// Bit-packed binary mask, row-major. Rows are padded to 64-bit words and
/// the padding bits are kept zero so word-level set operations stay exact.
class BinaryImage {
public:
    BinaryImage() = default;
    BinaryImage(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }

    bool get(int x, int y) const {
        const std::uint64_t w = words_[static_cast<std::size_t>(y) * words_per_row_ + (x >> 6)];
        return (w >> (x & 63)) & 1u;
    }
    void set(int x, int y) {
        words_[static_cast<std::size_t>(y) * words_per_row_ + (x >> 6)] |= std::uint64_t(1) << (x & 63);
    }
    void set(int x, int y, bool v);
    void clear();

    /// Number of foreground pixels.
    long count() const;

    int words_per_row() const { return words_per_row_; }
    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    bool operator==(const BinaryImage& other) const;

private:
    int width_ = 0, height_ = 0, words_per_row_ = 0;
    std::vector<std::uint64_t> words_;
};

/// 8-bit grayscale image, row-major.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 0);

    int width() const { return width_; }
    int height() const { return height_; }
    std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    std::uint8_t& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    const std::vector<std::uint8_t>& pixels() const { return pixels_; }

private:
    int width_ = 0, height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

// Binary PGM (P5, maxval 255). Masks are stored with 0 = background and
// 255 = foreground; the round-trip is bit-exact.
void write_pgm(const BinaryImage& mask, const std::string& path);
void write_pgm(const GrayImage& image, const std::string& path);
GrayImage read_pgm(const std::string& path);

/// Grayscale PNG input; color images are reduced by averaging the channels.
GrayImage read_png_gray(const std::string& path);

/// Reads a PGM or PNG file depending on the extension.
GrayImage read_gray(const std::string& path);

/// Foreground = intensity >= 128.
BinaryImage to_mask(const GrayImage& image);

/// Mask read shorthand: read_gray + to_mask.
BinaryImage read_mask(const std::string& path);

} // namespace ipf
