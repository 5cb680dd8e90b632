#include "ipf/segmentation.hpp"

#include <cstdlib>

#include "ipf/error.hpp"

namespace ipf {

BinaryImage background_subtract(const GrayImage& frame, const GrayImage& background, int threshold) {
    if (frame.width() != background.width() || frame.height() != background.height())
        throw Error("background_subtract: frame and background dimensions differ");
    if (threshold < 0)
        throw Error("background_subtract: threshold must be nonnegative");
    BinaryImage mask(frame.width(), frame.height());
    for (int y = 0; y < frame.height(); ++y)
        for (int x = 0; x < frame.width(); ++x)
            if (std::abs(int(frame.at(x, y)) - int(background.at(x, y))) > threshold)
                mask.set(x, y);
    return mask;
}

namespace {

BinaryImage morph3x3(const BinaryImage& in, bool erode) {
    BinaryImage out(in.width(), in.height());
    for (int y = 0; y < in.height(); ++y) {
        for (int x = 0; x < in.width(); ++x) {
            bool acc = erode;
            for (int dy = -1; dy <= 1 && acc == erode; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    const bool v = nx >= 0 && ny >= 0 && nx < in.width() && ny < in.height() &&
                                   in.get(nx, ny);
                    if (erode ? !v : v) {
                        acc = !erode;
                        break;
                    }
                }
            }
            out.set(x, y, acc);
        }
    }
    return out;
}

} // namespace

BinaryImage open_close(const BinaryImage& mask) {
    BinaryImage opened = morph3x3(morph3x3(mask, true), false);
    return morph3x3(morph3x3(opened, false), true);
}

} // namespace ipf
