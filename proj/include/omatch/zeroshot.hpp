#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "omatch/embed.hpp"

namespace omatch {

enum class TemplateMode { Plain, PictureOf, Ensemble };

std::string_view to_string(TemplateMode mode) noexcept;
std::optional<TemplateMode> parse_template_mode(std::string_view name) noexcept;

// K class labels, each with one or more written descriptions.
struct PromptSet {
  std::vector<std::string> classes;
  std::map<std::string, std::vector<std::string>> variants;
  TemplateMode template_mode = TemplateMode::PictureOf;

  // Throws EmptyVariantList for a class with no descriptions (or none listed).
  void validate() const;
};

struct ExpandedPrompt {
  std::string label;
  std::string text;

  friend bool operator==(const ExpandedPrompt&, const ExpandedPrompt&) = default;
};

// Prompt strings per class, in class order:
//   plain      -> each description verbatim
//   picture_of -> "A picture of a {d}"
//   ensemble   -> "A picture of a {d}", "A picture of a {d}, a product",
//                 "A {d}, a product", "{d}"
std::vector<ExpandedPrompt> expand_prompts(const PromptSet& prompts);

// Mean of each class's unit vectors, renormalized. `labels` names the class
// of every row of `variants`; output rows follow first appearance.
EmbeddingSet ensemble_embed(const EmbeddingSet& variants, std::span<const std::string> labels);

// Expands the prompt set, looks every prompt string up in `text_embeddings`
// (whose ids are the prompt texts) and reduces to one unit vector per class.
// Output ids are the class labels in PromptSet order.
EmbeddingSet class_prompt_embeddings(const PromptSet& prompts, const EmbeddingSet& text_embeddings);

// Column indices of one row ordered by descending score, ties by column index.
std::vector<std::size_t> rank_row(std::span<const double> row);

using TruthMap = std::unordered_map<std::string, std::string>;

// Percentage of rows whose true label is among the k best-scoring columns.
double topk_accuracy(const ClassMatrix& c, const TruthMap& truth, std::size_t k);

struct RankedLabel {
  std::string label;
  double score = 0.0;
};

struct ClassificationOutcome {
  std::vector<std::string> row_ids;
  std::vector<std::vector<RankedLabel>> ranked;
  double top1_accuracy = 0.0;
  double top5_accuracy = 0.0;  // top-min(5, K) when fewer than five classes exist
};

ClassificationOutcome classify(const ClassMatrix& c, const TruthMap& truth);

}  // namespace omatch
