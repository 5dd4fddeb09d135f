#include "omatch/color_hist.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "omatch/error.hpp"

namespace omatch {

namespace {

void validate(const RgbCrop& crop, const HistogramConfig& cfg) {
  if (cfg.hue_bins < 2 || cfg.sat_bins < 2)
    throw Error(ErrorKind::InvalidConfig, "histogram needs at least 2 hue and 2 saturation bins");
  if (crop.width < 1 || crop.height < 1)
    throw Error(ErrorKind::InvalidConfig, "crop dimensions must be positive");
  const auto count = static_cast<std::size_t>(crop.width) * static_cast<std::size_t>(crop.height);
  if (crop.pixels.size() != count)
    throw Error(ErrorKind::InvalidConfig, "pixel count " + std::to_string(crop.pixels.size()) +
                                              " does not match " + std::to_string(crop.width) + "x" +
                                              std::to_string(crop.height));
  if (crop.mask && crop.mask->size() != count)
    throw Error(ErrorKind::InvalidConfig, "mask size does not match crop");
}

}  // namespace

HueSat rgb_to_hs(Rgb p) {
  for (int c : {p.r, p.g, p.b})
    if (c < 0 || c > 255) throw Error(ErrorKind::ChannelOutOfRange, "channel value " + std::to_string(c));

  const int hi = std::max({p.r, p.g, p.b});
  const int lo = std::min({p.r, p.g, p.b});
  if (hi == lo) return {};

  const double chroma = hi - lo;
  double hue;
  if (hi == p.r)
    hue = 60.0 * std::fmod((p.g - p.b) / chroma + 6.0, 6.0);
  else if (hi == p.g)
    hue = 60.0 * ((p.b - p.r) / chroma + 2.0);
  else
    hue = 60.0 * ((p.r - p.g) / chroma + 4.0);
  if (hue >= 360.0) hue -= 360.0;
  return {hue, chroma / hi};
}

int bin_index(double value, double range, int bins) {
  const int idx = static_cast<int>(std::floor(value * bins / range));
  return std::clamp(idx, 0, bins - 1);
}

std::vector<double> hs_histogram_mass(const RgbCrop& crop, const HistogramConfig& cfg) {
  validate(crop, cfg);
  std::vector<std::uint64_t> hue(static_cast<std::size_t>(cfg.hue_bins), 0);
  std::vector<std::uint64_t> sat(static_cast<std::size_t>(cfg.sat_bins), 0);
  const bool masked = cfg.use_mask && crop.mask.has_value();
  std::uint64_t counted = 0;
  for (std::size_t i = 0; i < crop.pixels.size(); ++i) {
    if (masked && (*crop.mask)[i] == 0) continue;
    const HueSat hs = rgb_to_hs(crop.pixels[i]);
    ++hue[static_cast<std::size_t>(bin_index(hs.hue, 360.0, cfg.hue_bins))];
    ++sat[static_cast<std::size_t>(bin_index(hs.saturation, 1.0, cfg.sat_bins))];
    ++counted;
  }
  if (counted == 0) throw Error(ErrorKind::InvalidConfig, "mask selects no pixels");

  // Integer counts keep the result independent of pixel order.
  std::vector<double> out;
  out.reserve(hue.size() + sat.size());
  for (auto c : hue) out.push_back(static_cast<double>(c) / static_cast<double>(counted));
  for (auto c : sat) out.push_back(static_cast<double>(c) / static_cast<double>(counted));
  return out;
}

FeatureVector hs_histogram(const RgbCrop& crop, const HistogramConfig& cfg) {
  return normalize(FeatureVector{hs_histogram_mass(crop, cfg)});
}

}  // namespace omatch
