#include "omatch/zeroshot.hpp"

#include <algorithm>
#include <numeric>

#include "omatch/error.hpp"

namespace omatch {

std::string_view to_string(TemplateMode mode) noexcept {
  switch (mode) {
    case TemplateMode::Plain: return "plain";
    case TemplateMode::PictureOf: return "picture_of";
    case TemplateMode::Ensemble: return "ensemble";
  }
  return "unknown";
}

std::optional<TemplateMode> parse_template_mode(std::string_view name) noexcept {
  if (name == "plain") return TemplateMode::Plain;
  if (name == "picture_of") return TemplateMode::PictureOf;
  if (name == "ensemble") return TemplateMode::Ensemble;
  return std::nullopt;
}

void PromptSet::validate() const {
  for (const auto& label : classes) {
    auto it = variants.find(label);
    if (it == variants.end() || it->second.empty())
      throw Error(ErrorKind::EmptyVariantList, "class '" + label + "' has no descriptions");
  }
}

std::vector<ExpandedPrompt> expand_prompts(const PromptSet& prompts) {
  prompts.validate();
  std::vector<ExpandedPrompt> out;
  for (const auto& label : prompts.classes) {
    for (const auto& d : prompts.variants.at(label)) {
      switch (prompts.template_mode) {
        case TemplateMode::Plain:
          out.push_back({label, d});
          break;
        case TemplateMode::PictureOf:
          out.push_back({label, "A picture of a " + d});
          break;
        case TemplateMode::Ensemble:
          out.push_back({label, "A picture of a " + d});
          out.push_back({label, "A picture of a " + d + ", a product"});
          out.push_back({label, "A " + d + ", a product"});
          out.push_back({label, d});
          break;
      }
    }
  }
  return out;
}

EmbeddingSet ensemble_embed(const EmbeddingSet& variants, std::span<const std::string> labels) {
  if (labels.size() != variants.size())
    throw Error(ErrorKind::InvalidSet, "one class label is needed per variant vector");
  require_normalized(variants, "variant");

  std::vector<std::string> order;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& l : labels)
    if (slot.emplace(l, order.size()).second) order.push_back(l);

  Matrix sums(order.size(), variants.dim());
  std::vector<std::size_t> counts(order.size(), 0);
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const std::size_t s = slot.at(labels[i]);
    auto row = sums.row(s);
    const auto v = variants.vector(i);
    for (std::size_t d = 0; d < row.size(); ++d) row[d] += v[d];
    ++counts[s];
  }
  for (std::size_t s = 0; s < order.size(); ++s)
    for (double& x : sums.row(s)) x /= static_cast<double>(counts[s]);

  EmbeddingSet out;
  out.vectors = std::move(sums);
  out.crop_ids = std::move(order);
  out.provenance = variants.provenance;
  return normalize_set(std::move(out));
}

EmbeddingSet class_prompt_embeddings(const PromptSet& prompts, const EmbeddingSet& text_embeddings) {
  const auto expanded = expand_prompts(prompts);
  std::vector<std::string> texts, labels;
  texts.reserve(expanded.size());
  labels.reserve(expanded.size());
  for (const auto& e : expanded) {
    texts.push_back(e.text);
    labels.push_back(e.label);
  }
  return ensemble_embed(text_embeddings.select(texts), labels);
}

std::vector<std::size_t> rank_row(std::span<const double> row) {
  std::vector<std::size_t> idx(row.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
  return idx;
}

namespace {

std::size_t truth_column(const ClassMatrix& c, const TruthMap& truth, std::size_t row) {
  auto it = truth.find(c.row_ids[row]);
  if (it == truth.end())
    throw Error(ErrorKind::UnknownLabel, "no truth label for '" + c.row_ids[row] + "'");
  auto col = std::find(c.col_labels.begin(), c.col_labels.end(), it->second);
  if (col == c.col_labels.end())
    throw Error(ErrorKind::UnknownLabel, "label '" + it->second + "' of '" + c.row_ids[row] +
                                             "' is not among the prompt classes");
  return static_cast<std::size_t>(col - c.col_labels.begin());
}

// Rank of column `col` in `row`: columns scoring higher, plus equal-scoring
// columns with a lower index, come first.
std::size_t rank_of(std::span<const double> row, std::size_t col) {
  std::size_t ahead = 0;
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row[j] > row[col] || (row[j] == row[col] && j < col)) ++ahead;
  return ahead;
}

}  // namespace

double topk_accuracy(const ClassMatrix& c, const TruthMap& truth, std::size_t k) {
  const std::size_t classes = c.col_labels.size();
  if (k == 0 || k > classes)
    throw Error(ErrorKind::KOutOfRange, "k=" + std::to_string(k) + " with " + std::to_string(classes) + " classes");
  if (c.entries.rows() == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < c.entries.rows(); ++i)
    if (rank_of(c.entries.row(i), truth_column(c, truth, i)) < k) ++hits;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(c.entries.rows());
}

ClassificationOutcome classify(const ClassMatrix& c, const TruthMap& truth) {
  ClassificationOutcome out;
  out.row_ids = c.row_ids;
  for (std::size_t i = 0; i < c.entries.rows(); ++i) {
    std::vector<RankedLabel> ranked;
    const auto row = c.entries.row(i);
    for (std::size_t j : rank_row(row)) ranked.push_back({c.col_labels[j], row[j]});
    out.ranked.push_back(std::move(ranked));
  }
  out.top1_accuracy = topk_accuracy(c, truth, 1);
  out.top5_accuracy = topk_accuracy(c, truth, std::min<std::size_t>(5, c.col_labels.size()));
  return out;
}

}  // namespace omatch
