#include "omatch/matchers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "omatch/error.hpp"
#include "omatch/hungarian.hpp"

namespace omatch {

std::string_view to_string(AssignmentMethod method) noexcept {
  switch (method) {
    case AssignmentMethod::Argmax: return "argmax";
    case AssignmentMethod::Hungarian: return "hungarian";
    case AssignmentMethod::Discrete: return "discrete";
  }
  return "unknown";
}

std::optional<AssignmentMethod> parse_assignment_method(std::string_view name) noexcept {
  if (name == "argmax") return AssignmentMethod::Argmax;
  if (name == "hungarian") return AssignmentMethod::Hungarian;
  if (name == "discrete") return AssignmentMethod::Discrete;
  return std::nullopt;
}

namespace {

void require_nonempty(const SimilarityMatrix& s) {
  if (s.entries.empty()) throw Error(ErrorKind::EmptyMatrix, "similarity matrix has no entries");
  if (s.row_ids.size() != s.targets() || s.col_ids.size() != s.sources())
    throw Error(ErrorKind::InvalidSet, "similarity matrix ids do not match its shape");
}

// Sorts pairs, fills ids, scores and the unmatched lists.
AssignmentResult finish(const SimilarityMatrix& s, std::vector<MatchPair> pairs,
                        AssignmentMethod method) {
  std::sort(pairs.begin(), pairs.end(), [](const MatchPair& a, const MatchPair& b) {
    return std::tie(a.target, a.source) < std::tie(b.target, b.source);
  });
  AssignmentResult out;
  out.method = method;
  std::vector<char> src_used(s.sources(), 0), tgt_used(s.targets(), 0);
  for (auto& p : pairs) {
    p.target_id = s.row_ids[p.target];
    p.source_id = s.col_ids[p.source];
    p.score = s.entries(p.target, p.source);
    out.total_score += p.score;
    src_used[p.source] = 1;
    tgt_used[p.target] = 1;
  }
  for (std::size_t m = 0; m < s.sources(); ++m)
    if (!src_used[m]) out.unmatched_sources.push_back(s.col_ids[m]);
  for (std::size_t n = 0; n < s.targets(); ++n)
    if (!tgt_used[n]) out.unmatched_targets.push_back(s.row_ids[n]);
  out.pairs = std::move(pairs);
  return out;
}

// Cost of the best completion over the rows and columns not yet committed.
double completion_cost(const Matrix& cost, const std::vector<char>& row_done,
                       const std::vector<char>& col_done, std::vector<std::size_t>& rows,
                       std::vector<std::size_t>& cols, std::vector<int>& assignment) {
  rows.clear();
  cols.clear();
  for (std::size_t i = 0; i < cost.rows(); ++i)
    if (!row_done[i]) rows.push_back(i);
  for (std::size_t j = 0; j < cost.cols(); ++j)
    if (!col_done[j]) cols.push_back(j);
  if (rows.empty()) return 0.0;
  Matrix sub(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) sub(a, b) = cost(rows[a], cols[b]);
  const auto sol = hungarian::solve_min_cost(sub);
  for (std::size_t a = 0; a < rows.size(); ++a)
    assignment[rows[a]] = static_cast<int>(cols[static_cast<std::size_t>(sol.row_to_col[a])]);
  return sol.cost;
}

}  // namespace

AssignmentResult assign_argmax(const SimilarityMatrix& s) {
  require_nonempty(s);
  std::vector<MatchPair> pairs;
  pairs.reserve(s.sources());
  for (std::size_t m = 0; m < s.sources(); ++m) {
    std::size_t best = 0;
    for (std::size_t n = 1; n < s.targets(); ++n)
      if (s.entries(n, m) > s.entries(best, m)) best = n;
    pairs.push_back({best, m, {}, {}, 0.0});
  }
  return finish(s, std::move(pairs), AssignmentMethod::Argmax);
}

AssignmentResult assign_hungarian(const SimilarityMatrix& s) {
  require_nonempty(s);
  for (double v : s.entries.data())
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteEntry, "similarity matrix has a non-finite entry");

  const std::size_t targets = s.targets();
  const std::size_t sources = s.sources();
  const std::size_t n = std::max(targets, sources);
  const auto [lo_it, hi_it] = std::minmax_element(s.entries.data().begin(), s.entries.data().end());
  const double hi = *hi_it;
  // Padding is strictly worse than any real cell; padded pairs are reported unmatched.
  const double pad = (hi - *lo_it) + 1.0;

  Matrix cost(n, n, pad);
  for (std::size_t t = 0; t < targets; ++t)
    for (std::size_t m = 0; m < sources; ++m) cost(t, m) = hi - s.entries(t, m);

  const auto full = hungarian::solve_min_cost(cost);
  const double optimum = full.cost;
  const double tol = 1e-12 * static_cast<double>(n) * (1.0 + pad);

  // Lexicographic refinement: walk target rows in order and give each the
  // smallest source column that still admits an optimal completion. A cell
  // can only appear in an optimal matching if its reduced cost is zero, so
  // the dual potentials prune almost every candidate without a re-solve.
  std::vector<int> assignment = full.row_to_col;
  std::vector<char> row_done(n, 0), col_done(n, 0);
  std::vector<std::size_t> rows_scratch, cols_scratch;
  double committed = 0.0;
  for (std::size_t r = 0; r < targets; ++r) {
    const auto current = static_cast<std::size_t>(assignment[r]);
    for (std::size_t c = 0; c < sources && c < current; ++c) {
      if (col_done[c]) continue;
      if (cost(r, c) - full.row_potential[r] - full.col_potential[c] > tol) continue;
      std::vector<int> trial = assignment;
      row_done[r] = col_done[c] = 1;
      const double rest = completion_cost(cost, row_done, col_done, rows_scratch, cols_scratch, trial);
      row_done[r] = col_done[c] = 0;
      if (committed + cost(r, c) + rest <= optimum + tol) {
        trial[r] = static_cast<int>(c);
        assignment = std::move(trial);
        break;
      }
    }
    row_done[r] = 1;
    col_done[static_cast<std::size_t>(assignment[r])] = 1;
    committed += cost(r, static_cast<std::size_t>(assignment[r]));
  }

  std::vector<MatchPair> pairs;
  for (std::size_t t = 0; t < targets; ++t) {
    const auto m = static_cast<std::size_t>(assignment[t]);
    if (m < sources) pairs.push_back({t, m, {}, {}, 0.0});
  }
  return finish(s, std::move(pairs), AssignmentMethod::Hungarian);
}

AssignmentResult match_discrete(const ClassMatrix& c_source, const ClassMatrix& c_target) {
  const SimilarityMatrix s = semantic_similarity(c_source, c_target);
  const std::size_t labels = c_source.col_labels.size();
  if (labels == 0) throw Error(ErrorKind::EmptyPromptSet, "no labels to match on");

  struct Vote {
    std::size_t index;
    std::size_t label;
    double confidence;
  };
  auto votes = [labels](const Matrix& c) {
    std::vector<Vote> out;
    for (std::size_t i = 0; i < c.rows(); ++i) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < labels; ++k)
        if (c(i, k) > c(i, best)) best = k;
      out.push_back({i, best, c(i, best)});
    }
    std::stable_sort(out.begin(), out.end(), [](const Vote& a, const Vote& b) {
      if (a.label != b.label) return a.label < b.label;
      return a.confidence > b.confidence;
    });
    return out;
  };
  const auto src = votes(c_source.entries);
  const auto tgt = votes(c_target.entries);

  std::vector<MatchPair> pairs;
  std::size_t i = 0, j = 0;
  while (i < src.size() && j < tgt.size()) {
    if (src[i].label < tgt[j].label) {
      ++i;
    } else if (tgt[j].label < src[i].label) {
      ++j;
    } else {
      const std::size_t label = src[i].label;
      while (i < src.size() && j < tgt.size() && src[i].label == label && tgt[j].label == label)
        pairs.push_back({tgt[j++].index, src[i++].index, {}, {}, 0.0});
      while (i < src.size() && src[i].label == label) ++i;
      while (j < tgt.size() && tgt[j].label == label) ++j;
    }
  }
  return finish(s, std::move(pairs), AssignmentMethod::Discrete);
}

AssignmentResult assign(const SimilarityMatrix& s, AssignmentMethod method) {
  switch (method) {
    case AssignmentMethod::Argmax: return assign_argmax(s);
    case AssignmentMethod::Hungarian: return assign_hungarian(s);
    case AssignmentMethod::Discrete: break;
  }
  throw Error(ErrorKind::MethodConfigError, "discrete matching needs class matrices, not a similarity matrix");
}

}  // namespace omatch
