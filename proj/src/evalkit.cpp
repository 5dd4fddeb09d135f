#include "omatch/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "omatch/error.hpp"
#include "omatch/rng.hpp"

namespace omatch {

namespace {

// Maximum bipartite matching by augmenting paths; graphs here have at most a
// few dozen vertices per side.
class SmallMatcher {
 public:
  SmallMatcher(std::size_t left, std::size_t right) : adj_(left), match_right_(right, kNone) {}

  void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

  std::size_t solve() {
    std::size_t size = 0;
    for (std::size_t l = 0; l < adj_.size(); ++l) {
      seen_.assign(match_right_.size(), 0);
      if (augment(l)) ++size;
    }
    return size;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool augment(std::size_t l) {
    for (std::size_t r : adj_[l]) {
      if (seen_[r]) continue;
      seen_[r] = 1;
      if (match_right_[r] == kNone || augment(match_right_[r])) {
        match_right_[r] = l;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_right_;
  std::vector<char> seen_;
};

struct PairHash {
  std::size_t operator()(const IdPair& p) const noexcept {
    return std::hash<std::string>{}(p.first) * 31u ^ std::hash<std::string>{}(p.second);
  }
};

}  // namespace

std::size_t label_intersection(const MatchingProblem& problem) {
  std::unordered_map<std::string, std::size_t> source;
  for (const auto& c : problem.source_crops) ++source[c.class_label];
  std::size_t possible = 0;
  for (const auto& c : problem.target_crops) {
    auto it = source.find(c.class_label);
    if (it != source.end() && it->second > 0) {
      --it->second;
      ++possible;
    }
  }
  return possible;
}

MatchCount matching_accuracy(const AssignmentResult& result, const MatchingProblem& problem) {
  std::unordered_map<std::string, std::size_t> source_index, target_index;
  for (std::size_t i = 0; i < problem.source_crops.size(); ++i) source_index.emplace(problem.source_crops[i].crop_id, i);
  for (std::size_t i = 0; i < problem.target_crops.size(); ++i) target_index.emplace(problem.target_crops[i].crop_id, i);
  const std::unordered_set<IdPair, PairHash> truth(problem.ground_truth.begin(), problem.ground_truth.end());

  SmallMatcher by_label(problem.target_crops.size(), problem.source_crops.size());
  SmallMatcher by_instance(problem.target_crops.size(), problem.source_crops.size());
  for (const auto& p : result.pairs) {
    auto t = target_index.find(p.target_id);
    auto s = source_index.find(p.source_id);
    if (t == target_index.end() || s == source_index.end())
      throw Error(ErrorKind::ForeignCropId, problem.problem_id + ": pair " + p.target_id + "/" + p.source_id +
                                                " is not part of the problem");
    if (problem.target_crops[t->second].class_label != problem.source_crops[s->second].class_label) continue;
    by_label.add_edge(t->second, s->second);
    if (truth.contains({p.target_id, p.source_id})) by_instance.add_edge(t->second, s->second);
  }

  MatchCount count;
  count.possible = label_intersection(problem);
  count.label_correct = by_label.solve();
  count.correct = problem.instance_level ? by_instance.solve() : count.label_correct;
  return count;
}

double random_baseline(std::size_t n, std::size_t trials, std::uint64_t seed) {
  if (n == 0 || trials == 0) return 0.0;
  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  std::uint64_t fixed_points = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    for (std::size_t i = 0; i < n; ++i) fixed_points += perm[i] == i;
  }
  return 100.0 * static_cast<double>(fixed_points) / (static_cast<double>(n) * static_cast<double>(trials));
}

Interval wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {0.0, 100.0};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  const double acc = 100.0 * p;
  return {std::clamp(std::min(100.0 * (center - half), acc), 0.0, 100.0),
          std::clamp(std::max(100.0 * (center + half), acc), 0.0, 100.0)};
}

std::string_view to_string(MethodKind kind) noexcept {
  switch (kind) {
    case MethodKind::Visual: return "visual";
    case MethodKind::SemFeatN: return "semfeat-n";
    case MethodKind::SemFeatK: return "semfeat-k";
    case MethodKind::DiscreteN: return "discrete-n";
    case MethodKind::DiscreteK: return "discrete-k";
  }
  return "unknown";
}

const ReportRow* BenchmarkReport::find(std::string_view method, std::string_view assignment,
                                       std::string_view setting) const {
  for (const auto& r : rows)
    if (r.method == method && r.assignment == assignment && r.setting == setting) return &r;
  return nullptr;
}

EmbeddingSet present_label_prompts(const MatchingProblem& problem, const EmbeddingSet& prompts) {
  std::unordered_set<std::string> present;
  for (const auto& c : problem.target_crops) present.insert(c.class_label);
  for (const auto& label : present)
    if (prompts.find(label) == prompts.size())
      throw Error(ErrorKind::MissingEmbedding, "no prompt embedding for label '" + label + "'");
  std::vector<std::string> ids;
  for (const auto& label : prompts.crop_ids)
    if (present.contains(label)) ids.push_back(label);
  return prompts.select(ids);
}

namespace {

struct ProblemViews {
  std::vector<std::string> source_ids;
  std::vector<std::string> target_ids;
};

ProblemViews ids_of(const MatchingProblem& p) {
  ProblemViews v;
  for (const auto& c : p.source_crops) v.source_ids.push_back(c.crop_id);
  for (const auto& c : p.target_crops) v.target_ids.push_back(c.crop_id);
  return v;
}

const FeatureSource& features_for(const MethodSpec& m, const BenchmarkInputs& in) {
  auto it = in.features.find(m.features);
  if (it == in.features.end() || it->second.source == nullptr)
    throw Error(ErrorKind::MethodConfigError, "method '" + m.name + "' needs feature set '" + m.features + "'");
  return it->second;
}

const EmbeddingSet& prompts_for(const MethodSpec& m, const BenchmarkInputs& in) {
  auto it = in.prompts.find(m.prompts);
  if (it == in.prompts.end() || it->second == nullptr)
    throw Error(ErrorKind::MethodConfigError, "method '" + m.name + "' needs prompt set '" + m.prompts + "'");
  return *it->second;
}

struct ClassPair {
  ClassMatrix source;
  ClassMatrix target;
};

ClassPair class_matrices(const MatchingProblem& problem, const MethodSpec& method, const BenchmarkInputs& inputs,
                         const ClassifyOptions& classify) {
  const auto& feats = features_for(method, inputs);
  const auto& all_prompts = prompts_for(method, inputs);
  const auto ids = ids_of(problem);
  const EmbeddingSet src = feats.source->select(ids.source_ids);
  const EmbeddingSet tgt = (feats.target ? feats.target : feats.source)->select(ids.target_ids);
  const bool restrict = method.kind == MethodKind::SemFeatN || method.kind == MethodKind::DiscreteN;
  const EmbeddingSet prompts = restrict ? present_label_prompts(problem, all_prompts) : all_prompts;
  return {classify_matrix(src, prompts, classify), classify_matrix(tgt, prompts, classify)};
}

bool is_discrete(MethodKind k) { return k == MethodKind::DiscreteN || k == MethodKind::DiscreteK; }

}  // namespace

SimilarityMatrix method_similarity(const MatchingProblem& problem, const MethodSpec& method,
                                   const BenchmarkInputs& inputs, const ClassifyOptions& classify) {
  if (method.kind == MethodKind::Visual) {
    const auto& feats = features_for(method, inputs);
    const auto ids = ids_of(problem);
    return visual_similarity(feats.source->select(ids.source_ids),
                             (feats.target ? feats.target : feats.source)->select(ids.target_ids));
  }
  const auto c = class_matrices(problem, method, inputs, classify);
  return semantic_similarity(c.source, c.target);
}

BenchmarkReport run_benchmark(std::span<const MatchingProblem> problems, std::span<const MethodSpec> methods,
                              const BenchmarkInputs& inputs, const BenchmarkOptions& options) {
  if (methods.empty()) throw Error(ErrorKind::MethodConfigError, "no methods selected");
  if (options.assignments.empty()) throw Error(ErrorKind::MethodConfigError, "no assignment mode selected");
  for (auto a : options.assignments)
    if (a == AssignmentMethod::Discrete)
      throw Error(ErrorKind::MethodConfigError, "'discrete' is a method, not an assignment mode");
  for (const auto& m : methods) {
    features_for(m, inputs);
    if (m.kind != MethodKind::Visual) prompts_for(m, inputs);
  }

  // Result slots: one per (method, assignment); discrete methods own one slot.
  struct Slot {
    std::size_t method;
    std::optional<AssignmentMethod> assignment;
  };
  std::vector<Slot> slots;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    if (is_discrete(methods[m].kind))
      slots.push_back({m, std::nullopt});
    else
      for (auto a : options.assignments) slots.push_back({m, a});
  }

  const auto count = static_cast<std::int64_t>(problems.size());
  std::vector<std::vector<MatchCount>> counts(problems.size(), std::vector<MatchCount>(slots.size()));
  std::vector<std::exception_ptr> failures(problems.size());

#ifdef _OPENMP
  const int threads = options.jobs > 0 ? options.jobs : omp_get_max_threads();
#endif
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto& problem = problems[static_cast<std::size_t>(i)];
    try {
      for (std::size_t m = 0; m < methods.size(); ++m) {
        const auto& method = methods[m];
        if (is_discrete(method.kind)) {
          const auto c = class_matrices(problem, method, inputs, options.classify);
          const auto result = match_discrete(c.source, c.target);
          for (std::size_t s = 0; s < slots.size(); ++s)
            if (slots[s].method == m) counts[static_cast<std::size_t>(i)][s] = matching_accuracy(result, problem);
          continue;
        }
        const SimilarityMatrix sim = method_similarity(problem, method, inputs, options.classify);
        for (std::size_t s = 0; s < slots.size(); ++s) {
          if (slots[s].method != m) continue;
          counts[static_cast<std::size_t>(i)][s] = matching_accuracy(assign(sim, *slots[s].assignment), problem);
        }
      }
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  // Pool per (slot, setting) in problem order.
  std::vector<Setting> settings;
  for (const auto& p : problems)
    if (std::find(settings.begin(), settings.end(), p.setting_tag) == settings.end()) settings.push_back(p.setting_tag);
  std::sort(settings.begin(), settings.end());

  BenchmarkReport report;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    for (Setting setting : settings) {
      ReportRow row;
      row.method = methods[slots[s].method].name;
      row.assignment = slots[s].assignment ? std::string(to_string(*slots[s].assignment)) : "discrete";
      row.setting = std::string(to_string(setting));
      MatchCount total;
      for (std::size_t i = 0; i < problems.size(); ++i) {
        if (problems[i].setting_tag != setting) continue;
        total += counts[i][s];
        ++row.problem_count;
      }
      row.correct_matches = total.correct;
      row.possible_matches = total.possible;
      row.label_correct_matches = total.label_correct;
      row.accuracy_pct = total.possible ? 100.0 * static_cast<double>(total.correct) / static_cast<double>(total.possible) : 0.0;
      row.wilson_95 = wilson_interval(total.correct, total.possible);
      report.rows.push_back(std::move(row));
    }
  }

  std::ostringstream cfg;
  cfg << "schema=" << BenchmarkReport::kSchemaVersion << '\n' << options.config_text << '\n';
  for (const auto& m : methods)
    cfg << "method=" << m.name << ',' << to_string(m.kind) << ',' << m.features << ',' << m.prompts << '\n';
  for (auto a : options.assignments) cfg << "assignment=" << to_string(a) << '\n';
  cfg << "softmax=" << options.classify.softmax << ',' << options.classify.logit_scale << '\n';
  for (const auto& p : problems) cfg << "problem=" << p.problem_id << '\n';
  report.config_digest = fnv1a_hex(cfg.str());
  return report;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_json(const BenchmarkReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = BenchmarkReport::kSchemaVersion;
  j["config_digest"] = report.config_digest;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["method"] = r.method;
    row["assignment"] = r.assignment;
    row["setting"] = r.setting;
    row["correct_matches"] = r.correct_matches;
    row["possible_matches"] = r.possible_matches;
    row["label_correct_matches"] = r.label_correct_matches;
    row["accuracy_pct"] = r.accuracy_pct;
    row["problem_count"] = r.problem_count;
    row["wilson_95_interval"] = {r.wilson_95.lo, r.wilson_95.hi};
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::string to_text(const BenchmarkReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "method" << std::setw(11) << "assignment" << std::setw(9) << "setting"
      << std::right << std::setw(9) << "correct" << std::setw(10) << "possible" << std::setw(10) << "acc[%]"
      << std::setw(20) << "wilson95[%]" << std::setw(10) << "problems" << '\n';
  out << std::fixed;
  for (const auto& r : report.rows) {
    std::ostringstream ci;
    ci << std::fixed << std::setprecision(2) << r.wilson_95.lo << "-" << r.wilson_95.hi;
    out << std::left << std::setw(24) << r.method << std::setw(11) << r.assignment << std::setw(9) << r.setting
        << std::right << std::setw(9) << r.correct_matches << std::setw(10) << r.possible_matches << std::setw(10)
        << std::setprecision(4) << r.accuracy_pct << std::setw(20) << ci.str() << std::setw(10) << r.problem_count
        << '\n';
  }
  out << "config_digest " << report.config_digest << '\n';
  return out.str();
}

std::string to_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "method,assignment,setting,correct_matches,possible_matches,label_correct_matches,accuracy_pct,"
         "wilson_lo,wilson_hi,problem_count,config_digest\n";
  out << std::setprecision(17);
  for (const auto& r : report.rows)
    out << r.method << ',' << r.assignment << ',' << r.setting << ',' << r.correct_matches << ','
        << r.possible_matches << ',' << r.label_correct_matches << ',' << r.accuracy_pct << ',' << r.wilson_95.lo
        << ',' << r.wilson_95.hi << ',' << r.problem_count << ',' << report.config_digest << '\n';
  return out.str();
}

}  // namespace omatch
