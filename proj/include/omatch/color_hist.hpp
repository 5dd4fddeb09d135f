#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "omatch/embed.hpp"

namespace omatch {

struct Rgb {
  int r = 0;
  int g = 0;
  int b = 0;
};

// Row-major RGB pixels of one object crop, with an optional binary mask of
// the same size (non-zero = object pixel).
struct RgbCrop {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;
  std::optional<std::vector<std::uint8_t>> mask;
};

struct HistogramConfig {
  int hue_bins = 32;
  int sat_bins = 32;
  // When a mask is present only mask-interior pixels are binned.
  bool use_mask = true;
};

struct HueSat {
  double hue = 0.0;         // degrees in [0, 360)
  double saturation = 0.0;  // [0, 1]
};

// Hexagonal-model HSV hue and saturation. Achromatic pixels get hue 0 and
// saturation 0. Throws ChannelOutOfRange outside [0, 255].
HueSat rgb_to_hs(Rgb pixel);

// Hue histogram followed by saturation histogram, each summing to one, before
// the final L2 normalization.
std::vector<double> hs_histogram_mass(const RgbCrop& crop, const HistogramConfig& cfg = {});

// L2-normalized concatenated hue+saturation histogram.
FeatureVector hs_histogram(const RgbCrop& crop, const HistogramConfig& cfg = {});

// Half-open binning over [0, range) with the top bin closed at `range`.
int bin_index(double value, double range, int bins);

}  // namespace omatch
