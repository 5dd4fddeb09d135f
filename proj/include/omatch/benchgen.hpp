#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "omatch/embed.hpp"

namespace omatch {

struct BBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Metadata of one segmented object crop.
struct CropRecord {
  std::string crop_id;
  std::string image_id;
  std::string scene_id;
  int view_id = 0;
  std::string setting;
  std::string class_label;
  BBox bbox;
  std::int64_t area_px = 1;
  // Manifest fields this library does not know, kept as raw JSON text.
  std::map<std::string, std::string> extra;

  friend bool operator==(const CropRecord&, const CropRecord&) = default;
};

enum class Setting { Easy, Medium, Hard, Hardest, Nway };

std::string_view to_string(Setting s) noexcept;
std::optional<Setting> parse_setting(std::string_view name) noexcept;

// (target_id, source_id)
using IdPair = std::pair<std::string, std::string>;

struct MatchingProblem {
  std::string problem_id;
  Setting setting_tag = Setting::Nway;
  std::vector<CropRecord> source_crops;
  std::vector<CropRecord> target_crops;
  std::vector<IdPair> ground_truth;
  // True when ground-truth pairs name the same physical object; false when
  // any same-label pair counts as correct.
  bool instance_level = false;

  friend bool operator==(const MatchingProblem&, const MatchingProblem&) = default;
};

// Throws InvalidProblem when a ground-truth pair names a missing crop, reuses
// a crop, or joins crops of different labels, or when crop ids repeat.
void validate_problem(const MatchingProblem& problem);

struct PoolManifest {
  std::vector<CropRecord> records;
  // Keyed "sceneId/viewA/viewB"; lookups accept either view order.
  std::map<std::string, double> view_distance;

  std::optional<double> distance(const std::string& scene, int view_a, int view_b) const;
  // Throws InvalidSet on duplicate crop ids or non-positive areas.
  void validate() const;
};

struct GenResult {
  std::vector<MatchingProblem> problems;
  std::size_t skipped_scenes = 0;    // scenes with a single view
  std::size_t trivial_removed = 0;   // both sides hold exactly one object
};

// Easy: per scene, every view pair at the scene's minimal view distance.
// Medium: every view pair at the maximal distance. Ground truth is
// instance-level (same scene, same label).
GenResult gen_same_scene_pairs(const PoolManifest& pool, Setting mode);

// Hard: scene pairs of equal setting; Hardest: scene pairs of different
// setting. Each scene is represented by its lowest view id and a pair is
// emitted only when the scenes share at least one label.
GenResult gen_cross_scene_pairs(const PoolManifest& pool, Setting mode);

inline constexpr std::int64_t kMinNwayArea = 32 * 32;

// Drops crops smaller than min_area and keeps only the first crop of each
// class per image, in manifest order.
PoolManifest prefilter_nway(const PoolManifest& pool, std::int64_t min_area = kMinNwayArea);

// Samples synthetic N-way problems: n distinct labels from the whitelist and
// two distinct crops per label, the first becoming the source.
class NwaySampler {
 public:
  // An empty whitelist means every class that keeps two usable crops. Throws
  // InsufficientCrops when an explicitly whitelisted class keeps fewer.
  NwaySampler(const PoolManifest& pool, std::set<std::string> whitelist);

  MatchingProblem sample(std::size_t n, std::uint64_t seed) const;
  // Problem i is drawn with derive_seed(seed, i).
  std::vector<MatchingProblem> sample_batch(std::size_t n, std::uint64_t seed, std::size_t count) const;

  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<CropRecord>> crops_;  // per label
};

MatchingProblem gen_nway(const PoolManifest& pool, std::size_t n, const std::set<std::string>& whitelist,
                         std::uint64_t seed);

struct PlantedPoolConfig {
  std::size_t classes = 8;
  // Extra prompt concepts with no crops; they make a K-label prompt set larger than N.
  std::size_t distractor_classes = 0;
  std::size_t crops_per_class = 20;
  std::size_t dim = 64;
  // Per-coordinate standard deviation of the Gaussian noise added to each crop.
  double intra_class_noise = 0.4;
  // Further independent noise for the degraded-view copy of every crop.
  double source_extra_noise = 0.0;
  std::uint64_t seed = 0;
};

struct PlantedPool {
  PoolManifest pool;
  EmbeddingSet crops;           // concept + noise, normalized
  EmbeddingSet degraded_crops;  // crops plus source_extra_noise, normalized
  EmbeddingSet prompts;         // concept vectors; ids are class labels
  std::vector<std::string> crop_classes;  // labels that own crops
};

// Model-free stand-in for image/text embeddings. Throws DegenerateConcepts if
// no set of well-separated concepts is found within the retry cap.
PlantedPool gen_planted_pool(const PlantedPoolConfig& config);

// Largest |<c_i, c_j>| tolerated between two planted concepts.
inline constexpr double kMaxConceptOverlap = 0.9;

}  // namespace omatch
