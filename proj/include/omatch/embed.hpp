#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "omatch/matrix.hpp"

namespace omatch {

// Tolerances shared by every module that checks norms or matrix products.
inline constexpr double kNormTolerance = 1e-6;
inline constexpr double kMatmulTolerance = 1e-9;

struct FeatureVector {
  std::vector<double> values;

  std::size_t dim() const noexcept { return values.size(); }
};

// An ordered set of same-dimension vectors (one per row) with the crop ids
// they belong to. For prompt sets the ids are the class labels or prompt text.
struct EmbeddingSet {
  Matrix vectors;
  std::vector<std::string> crop_ids;
  std::string provenance;
  bool normalized = false;

  std::size_t size() const noexcept { return crop_ids.size(); }
  std::size_t dim() const noexcept { return vectors.cols(); }
  std::span<const double> vector(std::size_t i) const { return vectors.row(i); }

  // Rows of `ids` in the given order; throws MissingEmbedding naming the first absent id.
  EmbeddingSet select(std::span<const std::string> ids) const;
  // Index of `id`, or size() when absent.
  std::size_t find(const std::string& id) const;
};

// Object x prompt confidences; entry (i, k) = <v_i, s_k>.
struct ClassMatrix {
  Matrix entries;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_labels;
};

// Rows are target objects, columns are source objects.
struct SimilarityMatrix {
  Matrix entries;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;

  std::size_t targets() const noexcept { return entries.rows(); }
  std::size_t sources() const noexcept { return entries.cols(); }
};

// Divides each raw vector by its L2 norm. Errors: DimensionMismatch,
// NonFiniteInput, ZeroNormVector (naming the row).
EmbeddingSet normalize_set(const std::vector<std::vector<double>>& raw,
                           std::vector<std::string> crop_ids = {}, std::string provenance = {});
EmbeddingSet normalize_set(EmbeddingSet set);
FeatureVector normalize(FeatureVector v);

// Checks the normalized flag and that every row is unit length within kNormTolerance.
void require_normalized(const EmbeddingSet& set, const char* what);

SimilarityMatrix visual_similarity(const EmbeddingSet& source, const EmbeddingSet& target);

struct ClassifyOptions {
  // CLIP-style temperature softmax over each row. Off by default: the matcher
  // works on raw inner products.
  bool softmax = false;
  double logit_scale = 100.0;
};

ClassMatrix classify_matrix(const EmbeddingSet& objects, const EmbeddingSet& prompts,
                            const ClassifyOptions& options = {});

// S = C_t * C_s^T. Both matrices must carry identical col_labels.
SimilarityMatrix semantic_similarity(const ClassMatrix& c_source, const ClassMatrix& c_target);

}  // namespace omatch
