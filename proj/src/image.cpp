#include "ipf/image.hpp"

#include <bit>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>

#include <png.h>

#include "ipf/error.hpp"

namespace ipf {

BinaryImage::BinaryImage(int width, int height)
    : width_(width), height_(height), words_per_row_((width + 63) / 64),
      words_(static_cast<std::size_t>(height) * ((width + 63) / 64), 0) {
    if (width <= 0 || height <= 0)
        throw Error("BinaryImage dimensions must be positive");
}

void BinaryImage::set(int x, int y, bool v) {
    std::uint64_t& w = words_[static_cast<std::size_t>(y) * words_per_row_ + (x >> 6)];
    const std::uint64_t bit = std::uint64_t(1) << (x & 63);
    if (v)
        w |= bit;
    else
        w &= ~bit;
}

void BinaryImage::clear() {
    std::fill(words_.begin(), words_.end(), 0);
}

long BinaryImage::count() const {
    long n = 0;
    for (std::uint64_t w : words_)
        n += std::popcount(w);
    return n;
}

bool BinaryImage::operator==(const BinaryImage& other) const {
    return width_ == other.width_ && height_ == other.height_ && words_ == other.words_;
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, fill) {
    if (width <= 0 || height <= 0)
        throw Error("GrayImage dimensions must be positive");
}

namespace {

void write_pgm_bytes(const std::string& path, int w, int h, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path);
    out << "P5\n" << w << " " << h << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error("short write: " + path);
}

int next_pgm_token(std::istream& in) {
    // skips whitespace and '#' comments, returns a nonnegative integer
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n')
                c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c))
        throw Error("malformed PGM header");
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = in.get();
    }
    return value;
}

} // namespace

void write_pgm(const BinaryImage& mask, const std::string& path) {
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(mask.width()) * mask.height());
    std::size_t i = 0;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            bytes[i++] = mask.get(x, y) ? 255 : 0;
    write_pgm_bytes(path, mask.width(), mask.height(), bytes);
}

void write_pgm(const GrayImage& image, const std::string& path) {
    write_pgm_bytes(path, image.width(), image.height(), image.pixels());
}

GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open: " + path);
    char magic[2];
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        throw Error("not a binary PGM (P5): " + path);
    const int w = next_pgm_token(in);
    const int h = next_pgm_token(in);
    const int maxval = next_pgm_token(in);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
        throw Error("unsupported PGM header in " + path);
    GrayImage img(w, h);
    in.read(reinterpret_cast<char*>(&img.at(0, 0)), static_cast<std::streamsize>(w) * h);
    if (!in)
        throw Error("truncated PGM data: " + path);
    return img;
}

GrayImage read_png_gray(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp)
        throw Error("cannot open: " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png)
            png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw Error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw Error("failed to decode PNG: " + path);
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_strip_alpha(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    const int channels = png_get_channels(png, info);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * channels);
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < w; ++x) {
            if (channels == 1) {
                img.at(x, y) = row[x];
            } else {
                int sum = 0;
                for (int c = 0; c < channels; ++c)
                    sum += row[static_cast<std::size_t>(x) * channels + c];
                img.at(x, y) = static_cast<std::uint8_t>(sum / channels);
            }
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return img;
}

GrayImage read_gray(const std::string& path) {
    const auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (char& c : ext)
        c = static_cast<char>(std::tolower(c));
    if (ext == "png")
        return read_png_gray(path);
    return read_pgm(path);
}

BinaryImage to_mask(const GrayImage& image) {
    BinaryImage mask(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x)
            if (image.at(x, y) >= 128)
                mask.set(x, y);
    return mask;
}

BinaryImage read_mask(const std::string& path) {
    return to_mask(read_gray(path));
}

} // namespace ipf
