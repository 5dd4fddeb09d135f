#include "omatch/embed.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "omatch/error.hpp"
#include "omatch/kernels.hpp"

namespace omatch {

namespace {

void require_finite(const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (double v : m.row(r))
      if (!std::isfinite(v))
        throw Error(ErrorKind::NonFiniteInput, "row " + std::to_string(r) + " has a non-finite entry");
}

void require_same_dim(const EmbeddingSet& a, const EmbeddingSet& b) {
  if (a.size() > 0 && b.size() > 0 && a.dim() != b.dim())
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

}  // namespace

EmbeddingSet EmbeddingSet::select(std::span<const std::string> ids) const {
  EmbeddingSet out;
  out.provenance = provenance;
  out.normalized = normalized;
  out.vectors = Matrix(0, dim());
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(crop_ids.size());
  for (std::size_t i = 0; i < crop_ids.size(); ++i) index.emplace(crop_ids[i], i);
  for (const auto& id : ids) {
    auto it = index.find(id);
    if (it == index.end())
      throw Error(ErrorKind::MissingEmbedding, "no '" + provenance + "' embedding for '" + id + "'");
    out.vectors.push_row(vectors.row(it->second));
    out.crop_ids.push_back(id);
  }
  return out;
}

std::size_t EmbeddingSet::find(const std::string& id) const {
  auto it = std::find(crop_ids.begin(), crop_ids.end(), id);
  return static_cast<std::size_t>(it - crop_ids.begin());
}

EmbeddingSet normalize_set(const std::vector<std::vector<double>>& raw,
                           std::vector<std::string> crop_ids, std::string provenance) {
  EmbeddingSet set;
  set.vectors = Matrix(0, raw.empty() ? 0 : raw.front().size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].size() != set.vectors.cols())
      throw Error(ErrorKind::DimensionMismatch, "vector " + std::to_string(i) + " has dim " +
                                                    std::to_string(raw[i].size()) + ", expected " +
                                                    std::to_string(set.vectors.cols()));
    set.vectors.push_row(raw[i]);
  }
  if (crop_ids.empty())
    for (std::size_t i = 0; i < raw.size(); ++i) crop_ids.push_back(std::to_string(i));
  set.crop_ids = std::move(crop_ids);
  set.provenance = std::move(provenance);
  return normalize_set(std::move(set));
}

EmbeddingSet normalize_set(EmbeddingSet set) {
  if (set.vectors.rows() != set.crop_ids.size())
    throw Error(ErrorKind::InvalidSet, "vector count differs from crop id count");
  if (set.size() > 0 && set.dim() == 0)
    throw Error(ErrorKind::ZeroNormVector, "vector 0 has dimension 0");
  require_finite(set.vectors);
  const std::size_t zero = kernels::parallel::normalize_rows(set.vectors);
  if (zero != set.vectors.rows())
    throw Error(ErrorKind::ZeroNormVector, "vector " + std::to_string(zero) + " ('" +
                                               set.crop_ids[zero] + "') has zero norm");
  set.normalized = true;
  return set;
}

FeatureVector normalize(FeatureVector v) {
  Matrix m(0, v.dim());
  m.push_row(v.values);
  require_finite(m);
  if (kernels::serial::normalize_rows(m) != m.rows())
    throw Error(ErrorKind::ZeroNormVector, "vector 0 has zero norm");
  return FeatureVector{{m.row(0).begin(), m.row(0).end()}};
}

void require_normalized(const EmbeddingSet& set, const char* what) {
  if (!set.normalized) throw Error(ErrorKind::NotNormalized, std::string(what) + " set is not normalized");
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double norm = kernels::serial::l2_norm(set.vector(i));
    if (std::abs(norm - 1.0) > kNormTolerance)
      throw Error(ErrorKind::NotNormalized, std::string(what) + " row " + std::to_string(i) +
                                                " has norm " + std::to_string(norm));
  }
}

SimilarityMatrix visual_similarity(const EmbeddingSet& source, const EmbeddingSet& target) {
  require_same_dim(source, target);
  require_normalized(source, "source");
  require_normalized(target, "target");
  SimilarityMatrix s;
  s.entries = kernels::parallel::gemm_nt(target.vectors, source.vectors);
  s.row_ids = target.crop_ids;
  s.col_ids = source.crop_ids;
  return s;
}

ClassMatrix classify_matrix(const EmbeddingSet& objects, const EmbeddingSet& prompts,
                            const ClassifyOptions& options) {
  if (prompts.size() == 0) throw Error(ErrorKind::EmptyPromptSet, "no prompts to classify against");
  require_same_dim(objects, prompts);
  require_normalized(objects, "object");
  require_normalized(prompts, "prompt");
  ClassMatrix c;
  c.entries = kernels::parallel::gemm_nt(objects.vectors, prompts.vectors);
  c.row_ids = objects.crop_ids;
  c.col_labels = prompts.crop_ids;
  if (options.softmax) {
    for (std::size_t i = 0; i < c.entries.rows(); ++i) {
      auto row = c.entries.row(i);
      const double peak = *std::max_element(row.begin(), row.end());
      double total = 0.0;
      for (double& v : row) {
        v = std::exp(options.logit_scale * (v - peak));
        total += v;
      }
      for (double& v : row) v /= total;
    }
  }
  return c;
}

SimilarityMatrix semantic_similarity(const ClassMatrix& c_source, const ClassMatrix& c_target) {
  if (c_source.col_labels != c_target.col_labels)
    throw Error(ErrorKind::PromptSetMismatch, "source and target prompt labels differ");
  SimilarityMatrix s;
  s.entries = kernels::parallel::gemm_nt(c_target.entries, c_source.entries);
  s.row_ids = c_target.row_ids;
  s.col_ids = c_source.row_ids;
  return s;
}

}  // namespace omatch
