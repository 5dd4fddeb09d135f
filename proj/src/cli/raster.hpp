#pragma once

#include <filesystem>

#include "omatch/benchgen.hpp"
#include "omatch/color_hist.hpp"

namespace omatch::cli {

// Decodes the crop's image below `root` (image_id with or without one of the
// usual raster extensions) and cuts out its bounding box. A "mask_path"
// manifest field, relative to `root`, supplies the object mask.
RgbCrop load_crop(const CropRecord& record, const std::filesystem::path& root);

}  // namespace omatch::cli
