#pragma once

#include "ipf/image.hpp"

namespace ipf {

/// Silhouette extraction: output pixel = 1 iff |frame - background| > threshold.
/// Frame and background must have identical dimensions.
BinaryImage background_subtract(const GrayImage& frame, const GrayImage& background, int threshold);

/// Optional cleanup pass (3x3 binary opening followed by closing). Off by
/// default in the pipeline; helps against shadow speckle when enabled.
BinaryImage open_close(const BinaryImage& mask);

} // namespace ipf
