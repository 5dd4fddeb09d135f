#include "omatch/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "omatch/error.hpp"
#include "omatch/kernels.hpp"
#include "omatch/rng.hpp"

namespace omatch {

std::string_view to_string(Setting s) noexcept {
  switch (s) {
    case Setting::Easy: return "easy";
    case Setting::Medium: return "medium";
    case Setting::Hard: return "hard";
    case Setting::Hardest: return "hardest";
    case Setting::Nway: return "nway";
  }
  return "unknown";
}

std::optional<Setting> parse_setting(std::string_view name) noexcept {
  for (Setting s : {Setting::Easy, Setting::Medium, Setting::Hard, Setting::Hardest, Setting::Nway})
    if (name == to_string(s)) return s;
  return std::nullopt;
}

void validate_problem(const MatchingProblem& problem) {
  std::unordered_map<std::string, const CropRecord*> source, target;
  for (const auto& c : problem.source_crops)
    if (!source.emplace(c.crop_id, &c).second)
      throw Error(ErrorKind::InvalidProblem, problem.problem_id + ": duplicate source crop " + c.crop_id);
  for (const auto& c : problem.target_crops)
    if (!target.emplace(c.crop_id, &c).second)
      throw Error(ErrorKind::InvalidProblem, problem.problem_id + ": duplicate target crop " + c.crop_id);

  std::unordered_set<std::string> used_source, used_target;
  for (const auto& [t, s] : problem.ground_truth) {
    auto ti = target.find(t);
    auto si = source.find(s);
    if (ti == target.end() || si == source.end())
      throw Error(ErrorKind::InvalidProblem, problem.problem_id + ": ground truth names unknown crop");
    if (!used_target.insert(t).second || !used_source.insert(s).second)
      throw Error(ErrorKind::InvalidProblem, problem.problem_id + ": crop used by two ground-truth pairs");
    if (ti->second->class_label != si->second->class_label)
      throw Error(ErrorKind::InvalidProblem, problem.problem_id + ": ground-truth pair " + t + "/" + s +
                                                  " joins different labels");
  }
}

std::optional<double> PoolManifest::distance(const std::string& scene, int view_a, int view_b) const {
  for (auto [a, b] : {std::pair{view_a, view_b}, std::pair{view_b, view_a}}) {
    auto it = view_distance.find(scene + "/" + std::to_string(a) + "/" + std::to_string(b));
    if (it != view_distance.end()) return it->second;
  }
  return std::nullopt;
}

void PoolManifest::validate() const {
  std::unordered_set<std::string> ids;
  for (const auto& r : records) {
    if (!ids.insert(r.crop_id).second) throw Error(ErrorKind::InvalidSet, "duplicate crop id " + r.crop_id);
    if (r.area_px < 1) throw Error(ErrorKind::InvalidSet, "crop " + r.crop_id + " has area below 1");
  }
}

namespace {

struct View {
  int view_id = 0;
  std::vector<CropRecord> crops;
};

struct Scene {
  std::string scene_id;
  std::string setting;
  std::vector<View> views;  // ascending view id
};

// Scenes in order of first appearance in the manifest.
std::vector<Scene> group_scenes(const PoolManifest& pool) {
  std::vector<Scene> scenes;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& r : pool.records) {
    auto [it, fresh] = index.emplace(r.scene_id, scenes.size());
    if (fresh) scenes.push_back({r.scene_id, r.setting, {}});
    Scene& scene = scenes[it->second];
    auto view = std::find_if(scene.views.begin(), scene.views.end(),
                             [&](const View& v) { return v.view_id == r.view_id; });
    if (view == scene.views.end()) {
      scene.views.push_back({r.view_id, {}});
      view = scene.views.end() - 1;
    }
    view->crops.push_back(r);
  }
  for (auto& s : scenes)
    std::sort(s.views.begin(), s.views.end(), [](const View& a, const View& b) { return a.view_id < b.view_id; });
  return scenes;
}

// Pairs the k-th source crop of each label with the k-th target crop of it.
std::vector<IdPair> label_pairs(const std::vector<CropRecord>& source, const std::vector<CropRecord>& target) {
  std::unordered_map<std::string, std::vector<const CropRecord*>> by_label;
  for (const auto& s : source) by_label[s.class_label].push_back(&s);
  std::unordered_map<std::string, std::size_t> taken;
  std::vector<IdPair> pairs;
  for (const auto& t : target) {
    auto it = by_label.find(t.class_label);
    if (it == by_label.end()) continue;
    std::size_t& k = taken[t.class_label];
    if (k < it->second.size()) pairs.emplace_back(t.crop_id, it->second[k++]->crop_id);
  }
  return pairs;
}

bool trivial(const std::vector<CropRecord>& source, const std::vector<CropRecord>& target) {
  return source.size() == 1 && target.size() == 1;
}

}  // namespace

GenResult gen_same_scene_pairs(const PoolManifest& pool, Setting mode) {
  if (mode != Setting::Easy && mode != Setting::Medium)
    throw Error(ErrorKind::InvalidConfig, "same-scene pairs are generated for easy or medium only");
  GenResult out;
  for (const auto& scene : group_scenes(pool)) {
    if (scene.views.size() < 2) {
      ++out.skipped_scenes;
      continue;
    }
    struct Candidate {
      const View* a;
      const View* b;
      double distance;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < scene.views.size(); ++i)
      for (std::size_t j = i + 1; j < scene.views.size(); ++j) {
        const auto d = pool.distance(scene.scene_id, scene.views[i].view_id, scene.views[j].view_id);
        if (!d)
          throw Error(ErrorKind::MissingViewDistance,
                      scene.scene_id + "/" + std::to_string(scene.views[i].view_id) + "/" +
                          std::to_string(scene.views[j].view_id));
        candidates.push_back({&scene.views[i], &scene.views[j], *d});
      }
    const auto [lo, hi] = std::minmax_element(candidates.begin(), candidates.end(),
                                              [](const auto& x, const auto& y) { return x.distance < y.distance; });
    const double wanted = mode == Setting::Easy ? lo->distance : hi->distance;

    for (const auto& c : candidates) {
      if (c.distance != wanted) continue;
      if (trivial(c.a->crops, c.b->crops)) {
        ++out.trivial_removed;
        continue;
      }
      MatchingProblem p;
      p.problem_id = std::string(to_string(mode)) + "/" + scene.scene_id + "/" + std::to_string(c.a->view_id) +
                     "-" + std::to_string(c.b->view_id);
      p.setting_tag = mode;
      p.source_crops = c.a->crops;
      p.target_crops = c.b->crops;
      p.ground_truth = label_pairs(p.source_crops, p.target_crops);
      p.instance_level = true;
      if (p.ground_truth.empty()) continue;
      out.problems.push_back(std::move(p));
    }
  }
  return out;
}

GenResult gen_cross_scene_pairs(const PoolManifest& pool, Setting mode) {
  if (mode != Setting::Hard && mode != Setting::Hardest)
    throw Error(ErrorKind::InvalidConfig, "cross-scene pairs are generated for hard or hardest only");
  GenResult out;
  const auto scenes = group_scenes(pool);
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    for (std::size_t j = i + 1; j < scenes.size(); ++j) {
      const bool same_setting = scenes[i].setting == scenes[j].setting;
      if (same_setting != (mode == Setting::Hard)) continue;
      const auto& source = scenes[i].views.front().crops;
      const auto& target = scenes[j].views.front().crops;
      auto truth = label_pairs(source, target);
      if (truth.empty()) continue;
      if (trivial(source, target)) {
        ++out.trivial_removed;
        continue;
      }
      MatchingProblem p;
      p.problem_id = std::string(to_string(mode)) + "/" + scenes[i].scene_id + "|" + scenes[j].scene_id;
      p.setting_tag = mode;
      p.source_crops = source;
      p.target_crops = target;
      p.ground_truth = std::move(truth);
      p.instance_level = false;
      out.problems.push_back(std::move(p));
    }
  }
  return out;
}

PoolManifest prefilter_nway(const PoolManifest& pool, std::int64_t min_area) {
  PoolManifest out;
  out.view_distance = pool.view_distance;
  std::set<std::pair<std::string, std::string>> seen;  // (image, class)
  for (const auto& r : pool.records) {
    if (r.area_px < min_area) continue;
    if (!seen.emplace(r.image_id, r.class_label).second) continue;
    out.records.push_back(r);
  }
  return out;
}

NwaySampler::NwaySampler(const PoolManifest& pool, std::set<std::string> whitelist) {
  const PoolManifest filtered = prefilter_nway(pool);
  const bool every_class = whitelist.empty();
  if (every_class)
    for (const auto& r : pool.records) whitelist.insert(r.class_label);
  std::map<std::string, std::vector<CropRecord>> by_label;
  for (const auto& label : whitelist) by_label[label];
  for (const auto& r : filtered.records) {
    auto it = by_label.find(r.class_label);
    if (it != by_label.end()) it->second.push_back(r);
  }
  for (auto& [label, crops] : by_label) {
    if (crops.size() < 2) {
      if (every_class) continue;
      throw Error(ErrorKind::InsufficientCrops,
                  "class '" + label + "' has " + std::to_string(crops.size()) + " usable crops");
    }
    labels_.push_back(label);
    crops_.push_back(std::move(crops));
  }
}

MatchingProblem NwaySampler::sample(std::size_t n, std::uint64_t seed) const {
  if (n == 0 || n > labels_.size())
    throw Error(ErrorKind::NTooLarge, "n=" + std::to_string(n) + " with " + std::to_string(labels_.size()) +
                                          " whitelisted classes");
  Rng rng(seed);
  // Partial Fisher-Yates over label slots.
  std::vector<std::size_t> order(labels_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = 0; i < n; ++i) std::swap(order[i], order[i + rng.below(order.size() - i)]);

  MatchingProblem p;
  p.problem_id = "nway/" + std::to_string(n) + "/" + std::to_string(seed);
  p.setting_tag = Setting::Nway;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pool = crops_[order[i]];
    const std::size_t a = rng.below(pool.size());
    std::size_t b = rng.below(pool.size() - 1);
    if (b >= a) ++b;
    p.source_crops.push_back(pool[a]);
    p.target_crops.push_back(pool[b]);
    p.ground_truth.emplace_back(pool[b].crop_id, pool[a].crop_id);
  }
  return p;
}

std::vector<MatchingProblem> NwaySampler::sample_batch(std::size_t n, std::uint64_t seed, std::size_t count) const {
  std::vector<MatchingProblem> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(sample(n, derive_seed(seed, i)));
    out.back().problem_id = "nway/" + std::to_string(n) + "/" + std::to_string(seed) + "/" + std::to_string(i);
  }
  return out;
}

MatchingProblem gen_nway(const PoolManifest& pool, std::size_t n, const std::set<std::string>& whitelist,
                         std::uint64_t seed) {
  if (!whitelist.empty() && n > whitelist.size())
    throw Error(ErrorKind::NTooLarge, "n=" + std::to_string(n) + " with " + std::to_string(whitelist.size()) +
                                          " whitelisted classes");
  return NwaySampler(pool, whitelist).sample(n, seed);
}

namespace {

constexpr int kConceptRetries = 100;

void add_noise(Rng& rng, std::span<double> v, double sigma) {
  for (double& x : v) x += sigma * rng.normal();
}

Matrix sample_concepts(Rng& rng, std::size_t count, std::size_t dim) {
  for (int attempt = 0; attempt < kConceptRetries; ++attempt) {
    Matrix c(count, dim);
    for (std::size_t i = 0; i < count; ++i) add_noise(rng, c.row(i), 1.0);
    if (kernels::serial::normalize_rows(c) != count) continue;
    const Matrix gram = kernels::serial::gemm_nt(c, c);
    bool separated = true;
    for (std::size_t i = 0; i < count && separated; ++i)
      for (std::size_t j = i + 1; j < count; ++j)
        if (std::abs(gram(i, j)) > kMaxConceptOverlap) {
          separated = false;
          break;
        }
    if (separated) return c;
  }
  throw Error(ErrorKind::DegenerateConcepts,
              "no well-separated concept set after " + std::to_string(kConceptRetries) + " attempts");
}

std::string class_label(std::size_t i, bool distractor) {
  std::string digits = std::to_string(i);
  if (digits.size() < 2) digits.insert(0, 2 - digits.size(), '0');
  return (distractor ? "distractor_" : "class_") + digits;
}

}  // namespace

PlantedPool gen_planted_pool(const PlantedPoolConfig& cfg) {
  const std::size_t concepts = cfg.classes + cfg.distractor_classes;
  if (cfg.classes < 2) throw Error(ErrorKind::InvalidConfig, "planted pool needs at least 2 classes");
  if (cfg.dim < concepts) throw Error(ErrorKind::InvalidConfig, "dim must be at least the number of concepts");
  if (cfg.crops_per_class < 1) throw Error(ErrorKind::InvalidConfig, "crops_per_class must be positive");
  if (!(cfg.intra_class_noise >= 0.0) || !(cfg.source_extra_noise >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "noise levels must be non-negative");

  Rng rng(cfg.seed);
  const Matrix concept_vectors = sample_concepts(rng, concepts, cfg.dim);

  PlantedPool out;
  out.prompts.vectors = concept_vectors;
  out.prompts.provenance = "planted-text";
  for (std::size_t k = 0; k < concepts; ++k)
    out.prompts.crop_ids.push_back(k < cfg.classes ? class_label(k, false) : class_label(k - cfg.classes, true));
  out.prompts = normalize_set(std::move(out.prompts));

  out.crops.provenance = "planted-visual";
  out.crops.vectors = Matrix(0, cfg.dim);
  out.degraded_crops.provenance = "planted-visual-degraded";
  out.degraded_crops.vectors = Matrix(0, cfg.dim);
  std::vector<double> raw(cfg.dim), degraded(cfg.dim);
  for (std::size_t k = 0; k < cfg.classes; ++k) {
    const std::string label = class_label(k, false);
    out.crop_classes.push_back(label);
    for (std::size_t i = 0; i < cfg.crops_per_class; ++i) {
      const auto c = concept_vectors.row(k);
      std::copy(c.begin(), c.end(), raw.begin());
      add_noise(rng, raw, cfg.intra_class_noise);
      degraded = raw;
      add_noise(rng, degraded, cfg.source_extra_noise);

      CropRecord r;
      r.crop_id = label + "_" + std::to_string(i);
      r.image_id = "img_" + r.crop_id;
      r.scene_id = r.image_id;
      r.setting = "planted";
      r.class_label = label;
      r.bbox = {0, 0, 64, 64};
      r.area_px = 64 * 64;
      out.pool.records.push_back(r);
      out.crops.vectors.push_row(raw);
      out.crops.crop_ids.push_back(r.crop_id);
      out.degraded_crops.vectors.push_row(degraded);
      out.degraded_crops.crop_ids.push_back(r.crop_id);
    }
  }
  out.crops = normalize_set(std::move(out.crops));
  out.degraded_crops = normalize_set(std::move(out.degraded_crops));
  return out;
}

}  // namespace omatch
