#include "raster.hpp"

#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <json.hpp>

#include "omatch/error.hpp"

namespace omatch::cli {

namespace {

std::filesystem::path find_image(const std::filesystem::path& root, const std::string& image_id) {
  for (const char* ext : {"", ".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff"}) {
    auto p = root / (image_id + ext);
    if (std::filesystem::is_regular_file(p)) return p;
  }
  throw Error(ErrorKind::IoError, "no image for '" + image_id + "' under " + root.string());
}

cv::Rect clip_box(const BBox& box, const cv::Mat& image) {
  const cv::Rect full(0, 0, image.cols, image.rows);
  if (box.w <= 0 || box.h <= 0) return full;
  return cv::Rect(box.x, box.y, box.w, box.h) & full;
}

}  // namespace

RgbCrop load_crop(const CropRecord& record, const std::filesystem::path& root) {
  const auto path = find_image(root, record.image_id);
  const cv::Mat image = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (image.empty()) throw Error(ErrorKind::IoError, "cannot decode " + path.string());
  const cv::Rect box = clip_box(record.bbox, image);
  if (box.area() == 0) throw Error(ErrorKind::InvalidSet, "crop " + record.crop_id + " lies outside its image");

  RgbCrop crop;
  crop.width = box.width;
  crop.height = box.height;
  crop.pixels.reserve(static_cast<std::size_t>(box.area()));
  for (int y = box.y; y < box.y + box.height; ++y)
    for (int x = box.x; x < box.x + box.width; ++x) {
      const auto& bgr = image.at<cv::Vec3b>(y, x);
      crop.pixels.push_back({bgr[2], bgr[1], bgr[0]});
    }

  if (auto it = record.extra.find("mask_path"); it != record.extra.end()) {
    const auto mask_path = root / nlohmann::json::parse(it->second).get<std::string>();
    const cv::Mat mask = cv::imread(mask_path.string(), cv::IMREAD_GRAYSCALE);
    if (mask.empty()) throw Error(ErrorKind::IoError, "cannot decode mask " + mask_path.string());
    if (mask.size() != image.size())
      throw Error(ErrorKind::InvalidSet, "mask of " + record.crop_id + " differs in size from its image");
    std::vector<std::uint8_t> bits;
    bits.reserve(crop.pixels.size());
    for (int y = box.y; y < box.y + box.height; ++y)
      for (int x = box.x; x < box.x + box.width; ++x) bits.push_back(mask.at<std::uint8_t>(y, x) ? 1 : 0);
    crop.mask = std::move(bits);
  }
  return crop;
}

}  // namespace omatch::cli
