#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "omatch/benchgen.hpp"
#include "omatch/embed.hpp"
#include "omatch/matchers.hpp"

namespace omatch {

struct MatchCount {
  std::size_t correct = 0;
  std::size_t possible = 0;
  // Same-label pairs, ignoring instance identity. Equals `correct` unless the
  // problem carries instance-level ground truth.
  std::size_t label_correct = 0;

  MatchCount& operator+=(const MatchCount& o) {
    correct += o.correct;
    possible += o.possible;
    label_correct += o.label_correct;
    return *this;
  }
  friend bool operator==(const MatchCount&, const MatchCount&) = default;
};

// possible = size of the multiset intersection of source and target labels.
// correct = largest set of correct pairs using each crop at most once, so a
// target that several sources collapsed onto (argmax) scores only once.
// Throws ForeignCropId when the result names a crop outside the problem.
MatchCount matching_accuracy(const AssignmentResult& result, const MatchingProblem& problem);

std::size_t label_intersection(const MatchingProblem& problem);

// Monte Carlo accuracy (percent) of matching n objects by a uniformly random
// permutation.
double random_baseline(std::size_t n, std::size_t trials, std::uint64_t seed);

struct Interval {
  double lo = 0.0;
  double hi = 100.0;
};

// Wilson score interval at 95%, in percent.
Interval wilson_interval(std::size_t successes, std::size_t trials);

enum class MethodKind { Visual, SemFeatN, SemFeatK, DiscreteN, DiscreteK };

std::string_view to_string(MethodKind kind) noexcept;

struct MethodSpec {
  std::string name;
  MethodKind kind = MethodKind::Visual;
  // Crop feature set (key of BenchmarkInputs::features).
  std::string features;
  // Class prompt set (key of BenchmarkInputs::prompts); semantic kinds only.
  std::string prompts;
};

// Crop embeddings for one featurizer. Target crops are looked up in `target`
// when given, else in `source`.
struct FeatureSource {
  const EmbeddingSet* source = nullptr;
  const EmbeddingSet* target = nullptr;
};

struct BenchmarkInputs {
  std::map<std::string, FeatureSource> features;
  // One unit vector per class; ids are class labels.
  std::map<std::string, const EmbeddingSet*> prompts;
};

struct BenchmarkOptions {
  std::vector<AssignmentMethod> assignments{AssignmentMethod::Hungarian};
  ClassifyOptions classify;
  int jobs = 0;  // 0 = OpenMP default
  // Free-form description of the run folded into config_digest.
  std::string config_text;
};

struct ReportRow {
  std::string method;
  std::string assignment;
  std::string setting;
  std::size_t correct_matches = 0;
  std::size_t possible_matches = 0;
  std::size_t label_correct_matches = 0;
  double accuracy_pct = 0.0;
  std::size_t problem_count = 0;
  Interval wilson_95;
};

struct BenchmarkReport {
  static constexpr int kSchemaVersion = 1;
  std::string config_digest;
  std::vector<ReportRow> rows;

  const ReportRow* find(std::string_view method, std::string_view assignment, std::string_view setting) const;
};

// Runs every method over every problem and pools counts per (method,
// assignment, setting) before dividing. Output does not depend on `jobs`.
BenchmarkReport run_benchmark(std::span<const MatchingProblem> problems, std::span<const MethodSpec> methods,
                              const BenchmarkInputs& inputs, const BenchmarkOptions& options);

// Similarity matrix a method sees for one problem (discrete kinds return the
// semantic matrix they score against).
SimilarityMatrix method_similarity(const MatchingProblem& problem, const MethodSpec& method,
                                   const BenchmarkInputs& inputs, const ClassifyOptions& classify = {});

// Labels a SemFeat-N / discrete-N method restricts its prompts to: the labels
// of the target crops, in prompt-set order.
EmbeddingSet present_label_prompts(const MatchingProblem& problem, const EmbeddingSet& prompts);

std::string to_json(const BenchmarkReport& report);
std::string to_text(const BenchmarkReport& report);
std::string to_csv(const BenchmarkReport& report);

// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace omatch
