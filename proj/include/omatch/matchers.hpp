#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omatch/embed.hpp"

namespace omatch {

enum class AssignmentMethod { Argmax, Hungarian, Discrete };

std::string_view to_string(AssignmentMethod method) noexcept;
std::optional<AssignmentMethod> parse_assignment_method(std::string_view name) noexcept;

struct MatchPair {
  std::size_t target = 0;  // row in the similarity matrix
  std::size_t source = 0;  // column in the similarity matrix
  std::string target_id;
  std::string source_id;
  double score = 0.0;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct AssignmentResult {
  std::vector<MatchPair> pairs;  // sorted by (target, source)
  std::vector<std::string> unmatched_sources;
  std::vector<std::string> unmatched_targets;
  double total_score = 0.0;
  AssignmentMethod method = AssignmentMethod::Argmax;
};

// Every source column goes to the target row with the largest similarity
// (lowest row on ties). Several sources may collapse onto one target.
AssignmentResult assign_argmax(const SimilarityMatrix& s);

// One-to-one assignment maximizing total similarity; min(M, N) pairs. Among
// equal-score optima the lexicographically smallest sorted pair list wins.
AssignmentResult assign_hungarian(const SimilarityMatrix& s);

// Labels every object by its row argmax independently and pairs crops that
// received the same label, highest confidence first within a label group.
// total_score is measured on the semantic similarity C_t * C_s^T.
AssignmentResult match_discrete(const ClassMatrix& c_source, const ClassMatrix& c_target);

AssignmentResult assign(const SimilarityMatrix& s, AssignmentMethod method);

}  // namespace omatch
