// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "apc_emulator.hpp"
#include "omatch/benchgen.hpp"
#include "omatch/embedstore.hpp"
#include "omatch/error.hpp"
#include "omatch/evalkit.hpp"
#include "omatch/kernels.hpp"
#include "omatch/matchers.hpp"
#include "omatch/zeroshot.hpp"
#include "oracles.hpp"

using namespace omatch;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(const char* name, bool pass, const std::string& detail) {
  std::printf("%s  %-34s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SimilarityMatrix wrap(Matrix m) {
  SimilarityMatrix s;
  s.entries = std::move(m);
  for (std::size_t i = 0; i < s.entries.rows(); ++i) s.row_ids.push_back("t" + std::to_string(i));
  for (std::size_t j = 0; j < s.entries.cols(); ++j) s.col_ids.push_back("s" + std::to_string(j));
  return s;
}

std::vector<std::pair<std::size_t, std::size_t>> pairs_of(const AssignmentResult& r) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& p : r.pairs) out.emplace_back(p.target, p.source);
  return out;
}

// ---------------------------------------------------------------------------

void hungarian_oracle() {
  const auto start = Clock::now();
  Rng rng(20240601);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const auto s = wrap(oracle::random_matrix(rng, n, n));
    const double got = assign_hungarian(s).total_score;
    worst = std::max(worst, std::abs(got - oracle::brute_force_max_assignment(s.entries)));
  }
  const double t = seconds_since(start);
  report("hungarian-optimality", worst <= 1e-9 && t < 10.0,
         fmt("1000 matrices n=2..7, max |gap| %.3g (<=1e-9), %.2fs (<10s)", worst, t));
}

void random_baseline_check() {
  struct Case {
    std::size_t n;
    double lo, hi;
  };
  std::string detail;
  bool pass = true;
  for (const Case c : {Case{8, 12.1, 12.9}, Case{20, 4.75, 5.25}}) {
    const auto start = Clock::now();
    const double acc = random_baseline(c.n, 100000, 7);
    const double t = seconds_since(start);
    pass = pass && acc >= c.lo && acc <= c.hi && t < 5.0;
    detail += fmt("n=%zu: %.4f in [%.2f, %.2f], %.2fs (<5s); ", c.n, acc, c.lo, c.hi, t);
  }
  report("random-matching-baseline", pass, detail);
}

void random_classification() {
  Rng rng(39);
  const std::size_t rows = 10000, classes = 39;
  ClassMatrix c;
  c.entries = Matrix(rows, classes);
  TruthMap truth;
  for (std::size_t k = 0; k < classes; ++k) c.col_labels.push_back("c" + std::to_string(k));
  for (std::size_t i = 0; i < rows; ++i) {
    c.row_ids.push_back("r" + std::to_string(i));
    truth[c.row_ids.back()] = c.col_labels[rng.below(classes)];
    for (double& v : c.entries.row(i)) v = rng.uniform();
  }
  const double top1 = topk_accuracy(c, truth, 1);
  const double top5 = topk_accuracy(c, truth, 5);
  report("random-classification", top1 >= 2.1 && top1 <= 3.1 && top5 >= 11.8 && top5 <= 13.8,
         fmt("39 classes, 1e4 rows: top1 %.4f in [2.1, 3.1], top5 %.4f in [11.8, 13.8]", top1, top5));
}

void planted_ordering() {
  const auto start = Clock::now();
  PlantedPoolConfig cfg;
  cfg.classes = 8;
  cfg.distractor_classes = 32;
  cfg.dim = 64;
  cfg.intra_class_noise = 0.4;
  cfg.source_extra_noise = 0.8;
  cfg.seed = 1;
  const PlantedPool planted = gen_planted_pool(cfg);
  const std::set<std::string> whitelist(planted.crop_classes.begin(), planted.crop_classes.end());
  const auto problems = NwaySampler(planted.pool, whitelist).sample_batch(8, 7, 200);

  BenchmarkInputs inputs;
  inputs.features["planted"] = {&planted.degraded_crops, &planted.crops};
  inputs.prompts["concepts"] = &planted.prompts;
  const std::vector<MethodSpec> methods{{"visual", MethodKind::Visual, "planted", ""},
                                        {"semfeat-n", MethodKind::SemFeatN, "planted", "concepts"},
                                        {"semfeat-k", MethodKind::SemFeatK, "planted", "concepts"}};
  const auto r = run_benchmark(problems, methods, inputs, {});
  const double visual = r.find("visual", "hungarian", "nway")->accuracy_pct;
  const double n = r.find("semfeat-n", "hungarian", "nway")->accuracy_pct;
  const double k = r.find("semfeat-k", "hungarian", "nway")->accuracy_pct;
  const double t = seconds_since(start);
  report("planted-method-ordering", n - visual >= 5.0 && n >= k && t < 120.0,
         fmt("200 8-way problems: semfeat-n %.3f, visual %.3f (gap %.3f >= 5), semfeat-k(K=40) %.3f <= semfeat-n, "
             "%.2fs (<120s)",
             n, visual, n - visual, k, t));
}

void degradation_monotonicity() {
  apc::Config cfg;
  cfg.seed = 11;
  const auto emu = apc::emulate(cfg);
  std::vector<MatchingProblem> problems;
  for (Setting s : {Setting::Easy, Setting::Medium}) {
    auto g = gen_same_scene_pairs(emu.pool, s);
    problems.insert(problems.end(), g.problems.begin(), g.problems.end());
  }
  for (Setting s : {Setting::Hard, Setting::Hardest}) {
    auto g = gen_cross_scene_pairs(emu.pool, s);
    problems.insert(problems.end(), g.problems.begin(), g.problems.end());
  }

  BenchmarkInputs inputs;
  inputs.features["emu"] = {&emu.crops, nullptr};
  inputs.prompts["concepts"] = &emu.prompts;
  const std::vector<MethodSpec> methods{{"visual", MethodKind::Visual, "emu", ""},
                                        {"semfeat-n", MethodKind::SemFeatN, "emu", "concepts"},
                                        {"semfeat-k", MethodKind::SemFeatK, "emu", "concepts"},
                                        {"discrete-n", MethodKind::DiscreteN, "emu", "concepts"},
                                        {"discrete-k", MethodKind::DiscreteK, "emu", "concepts"}};
  BenchmarkOptions opt;
  opt.assignments = {AssignmentMethod::Argmax, AssignmentMethod::Hungarian};
  const auto r = run_benchmark(problems, methods, inputs, opt);

  bool pass = true;
  std::ostringstream detail;
  const char* order[] = {"easy", "medium", "hard", "hardest"};
  for (const auto& m : methods) {
    for (const char* a : {"argmax", "hungarian", "discrete"}) {
      if (!r.find(m.name, a, "easy")) continue;
      detail << m.name << '/' << a << ' ';
      double prev = 101.0;
      for (const char* s : order) {
        const auto* row = r.find(m.name, a, s);
        if (!row) {
          pass = false;
          detail << s << "=missing ";
          continue;
        }
        detail << fmt("%.1f ", row->accuracy_pct);
        pass = pass && row->accuracy_pct <= prev;
        prev = row->accuracy_pct;
      }
      detail << "; ";
    }
  }
  report("degradation-monotonicity", pass, detail.str());
}

// ---------------------------------------------------------------------------

bool normalization_invariants(Rng& rng) {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng.below(6), dim = 1 + rng.below(20);
    auto raw = oracle::random_vectors(rng, rows, dim);
    const auto once = normalize_set(raw, {}, "t");
    const auto twice = normalize_set(once);
    const double scale = std::exp(rng.uniform() * 20.0 - 10.0);
    for (auto& v : raw)
      for (double& x : v) x *= scale;
    const auto scaled = normalize_set(raw, {}, "t");
    for (std::size_t i = 0; i < once.vectors.data().size(); ++i) {
      if (std::abs(once.vectors.data()[i] - twice.vectors.data()[i]) > 1e-7) return false;
      if (std::abs(once.vectors.data()[i] - scaled.vectors.data()[i]) > 1e-6) return false;
    }
  }
  return true;
}

bool rotation_invariance(Rng& rng) {
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 2 + rng.below(10);
    const auto q = oracle::random_orthogonal(rng, dim);
    auto objects = oracle::random_vectors(rng, 1 + rng.below(6), dim);
    auto prompts = oracle::random_vectors(rng, 1 + rng.below(6), dim);
    const auto c = classify_matrix(normalize_set(objects, {}, "v"), normalize_set(prompts, {}, "s"));
    for (auto& v : objects) v = oracle::apply(q, v);
    for (auto& v : prompts) v = oracle::apply(q, v);
    const auto rotated = classify_matrix(normalize_set(objects, {}, "v"), normalize_set(prompts, {}, "s"));
    for (std::size_t i = 0; i < c.entries.data().size(); ++i)
      if (std::abs(c.entries.data()[i] - rotated.entries.data()[i]) > kMatmulTolerance) return false;
  }
  return true;
}

bool matcher_invariants(Rng& rng) {
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng.below(7), n = 1 + rng.below(7);
    const auto s = wrap(oracle::random_matrix(rng, m, n));

    auto transformed = s;
    for (double& v : transformed.entries.data()) v = std::exp(3.0 * v) + 2.0;
    if (pairs_of(assign_argmax(s)) != pairs_of(assign_argmax(transformed))) return false;

    auto shifted = s;
    const double c = rng.uniform() * 10.0 - 5.0;
    for (double& v : shifted.entries.data()) v += c;
    if (pairs_of(assign_hungarian(s)) != pairs_of(assign_hungarian(shifted))) return false;

    // Row permutation: the same target ids receive the same source ids.
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    for (std::size_t i = m; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    SimilarityMatrix permuted = s;
    for (std::size_t i = 0; i < m; ++i) {
      permuted.row_ids[i] = s.row_ids[perm[i]];
      for (std::size_t j = 0; j < n; ++j) permuted.entries(i, j) = s.entries(perm[i], j);
    }
    auto ids = [](const AssignmentResult& r) {
      std::set<std::pair<std::string, std::string>> out;
      for (const auto& p : r.pairs) out.emplace(p.target_id, p.source_id);
      return out;
    };
    if (ids(assign_hungarian(s)) != ids(assign_hungarian(permuted))) return false;
    if (ids(assign_argmax(s)) != ids(assign_argmax(permuted))) return false;
  }
  return true;
}

bool self_match_identity(Rng& rng) {
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t count = 1 + rng.below(8);
    const auto set = normalize_set(oracle::random_vectors(rng, count, 16), {}, "v");
    const auto s = visual_similarity(set, set);
    for (const auto& r : {assign_hungarian(s), assign_argmax(s)}) {
      if (r.pairs.size() != count) return false;
      for (const auto& p : r.pairs)
        if (p.target != p.source) return false;
    }
  }
  return true;
}

bool store_round_trip(Rng& rng) {
  // Round trip: values that are exact floats survive bit for bit.
  for (int trial = 0; trial < 50; ++trial) {
    EmbeddingSet set;
    set.provenance = "rt";
    set.vectors = Matrix(1 + rng.below(5), 1 + rng.below(9));
    for (double& v : set.vectors.data()) v = static_cast<float>(rng.normal());
    for (std::size_t i = 0; i < set.vectors.rows(); ++i) set.crop_ids.push_back(std::to_string(i));
    const auto bytes = store::encode_embeddings(set);
    const auto back = store::decode_embeddings(bytes);
    if (!(back.vectors == set.vectors) || back.provenance != set.provenance) return false;
    if (store::encode_embeddings(back) != bytes) return false;
  }
  // Little-endian fixture: [0.5, -2.0] with provenance "ab".
  const std::vector<std::uint8_t> fixture{'O', 'M', 'E', 'S', 1, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0,
                                          0,   0,   0,   0,   2, 0, 0, 0, 'a', 'b', 0, 0, 0, 0x3f, 0, 0, 0, 0xc0};
  const auto decoded = store::decode_embeddings(fixture);
  if (decoded.vectors(0, 0) != 0.5 || decoded.vectors(0, 1) != -2.0) return false;
  // The same file with every 4-byte word after the magic swapped, as a
  // big-endian writer would produce it: must be rejected, not misread.
  auto swapped = fixture;
  for (std::size_t off = 4; off + 4 <= 28; off += 4) std::swap(swapped[off], swapped[off + 3]), std::swap(swapped[off + 1], swapped[off + 2]);
  try {
    store::decode_embeddings(swapped);
    return false;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnsupportedVersion) return false;
  }
  return true;
}

void invariant_suites() {
  Rng rng(77);
  struct Suite {
    const char* name;
    std::function<bool(Rng&)> run;
  };
  const Suite suites[] = {{"normalize idempotence/scale", normalization_invariants},
                          {"class-matrix rotation", rotation_invariance},
                          {"argmax monotone/hungarian shift/permutation", matcher_invariants},
                          {"self-match identity", self_match_identity},
                          {"embedding file round trip + byte order", store_round_trip}};
  bool pass = true;
  std::string detail;
  for (const auto& s : suites) {
    bool ok = false;
    try {
      ok = s.run(rng);
    } catch (const std::exception& e) {
      detail += std::string("[") + e.what() + "] ";
    }
    pass = pass && ok;
    detail += std::string(s.name) + (ok ? " ok; " : " FAILED; ");
  }
  report("invariant-suites", pass, detail);
}

void accuracy_definition() {
  auto crop = [](std::string id, std::string label) {
    CropRecord r;
    r.crop_id = std::move(id);
    r.class_label = std::move(label);
    return r;
  };
  MatchingProblem p;
  p.source_crops = {crop("s0", "A"), crop("s1", "A"), crop("s2", "B")};
  p.target_crops = {crop("t0", "A"), crop("t1", "C")};
  const bool intersection = label_intersection(p) == 1;

  AssignmentResult right;
  right.pairs = {{0, 0, "t0", "s1", 0.0}, {1, 2, "t1", "s2", 0.0}};
  const auto good = matching_accuracy(right, p);
  AssignmentResult wrong;
  wrong.pairs = {{0, 2, "t0", "s2", 0.0}, {1, 0, "t1", "s0", 0.0}};
  const auto bad = matching_accuracy(wrong, p);

  MatchingProblem q;
  q.source_crops = {crop("a", "X"), crop("b", "X"), crop("c", "Y")};
  q.target_crops = {crop("d", "X"), crop("e", "Y"), crop("f", "Y")};
  const bool second = label_intersection(q) == 2;

  const bool pass = intersection && second && good.correct == 1 && good.possible == 1 && bad.correct == 0;
  report("accuracy-definition", pass,
         fmt("{A,A,B} vs {A,C}: possible %zu (=1), right %zu/%zu, wrong %zu/%zu; {X,X,Y} vs {X,Y,Y}: possible %zu (=2)",
             label_intersection(p), good.correct, good.possible, bad.correct, bad.possible, label_intersection(q)));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)()>> criteria{
      {"hungarian-optimality", hungarian_oracle},       {"random-matching-baseline", random_baseline_check},
      {"random-classification", random_classification}, {"planted-method-ordering", planted_ordering},
      {"degradation-monotonicity", degradation_monotonicity}, {"invariant-suites", invariant_suites},
      {"accuracy-definition", accuracy_definition}};
  for (const auto& [name, run] : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      report(name, false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
