#include <doctest.h>

#include <cmath>
#include <tuple>

#include "omatch/benchgen.hpp"
#include "omatch/error.hpp"
#include "omatch/evalkit.hpp"
#include "omatch/matchers.hpp"

using namespace omatch;

namespace {

CropRecord crop(std::string id, std::string label) {
  CropRecord r;
  r.crop_id = std::move(id);
  r.class_label = std::move(label);
  return r;
}

MatchPair pair(std::string target, std::string source) {
  MatchPair p;
  p.target_id = std::move(target);
  p.source_id = std::move(source);
  return p;
}

AssignmentResult result_of(std::vector<MatchPair> pairs) {
  AssignmentResult r;
  r.pairs = std::move(pairs);
  return r;
}

struct PlantedSetup {
  PlantedPool planted;
  std::vector<MatchingProblem> problems;
  BenchmarkInputs inputs;
  std::vector<MethodSpec> methods;
};

PlantedSetup planted_setup(std::size_t n, std::size_t count, std::size_t distractors) {
  PlantedSetup s;
  PlantedPoolConfig cfg;
  cfg.classes = 8;
  cfg.distractor_classes = distractors;
  cfg.crops_per_class = 10;
  cfg.dim = 32;
  cfg.intra_class_noise = 0.8;
  cfg.seed = 3;
  s.planted = gen_planted_pool(cfg);
  s.problems = NwaySampler(s.planted.pool, {}).sample_batch(n, 17, count);
  s.inputs.features["vis"] = {&s.planted.crops, nullptr};
  s.inputs.prompts["text"] = &s.planted.prompts;
  s.methods = {{"visual", MethodKind::Visual, "vis", ""},
               {"semfeat-n", MethodKind::SemFeatN, "vis", "text"},
               {"semfeat-k", MethodKind::SemFeatK, "vis", "text"},
               {"discrete-n", MethodKind::DiscreteN, "vis", "text"}};
  return s;
}

}  // namespace

TEST_CASE("possible matches are the label multiset intersection") {
  MatchingProblem p;
  p.source_crops = {crop("s0", "A"), crop("s1", "A"), crop("s2", "B")};
  p.target_crops = {crop("t0", "A"), crop("t1", "C")};
  CHECK(label_intersection(p) == 1);

  auto m = matching_accuracy(result_of({pair("t0", "s1"), pair("t1", "s2")}), p);
  CHECK(m == MatchCount{1, 1, 1});
  m = matching_accuracy(result_of({pair("t0", "s2"), pair("t1", "s0")}), p);
  CHECK(m == MatchCount{0, 1, 0});
}

TEST_CASE("a target hit by several sources is credited once") {
  MatchingProblem p;
  p.source_crops = {crop("s0", "A"), crop("s1", "A")};
  p.target_crops = {crop("t0", "A"), crop("t1", "A")};
  const auto m = matching_accuracy(result_of({pair("t0", "s0"), pair("t0", "s1")}), p);
  CHECK(m.correct == 1);
  CHECK(m.possible == 2);
}

TEST_CASE("instance-level ground truth separates same-label instances") {
  MatchingProblem p;
  p.source_crops = {crop("s0", "A"), crop("s1", "A")};
  p.target_crops = {crop("t0", "A"), crop("t1", "A")};
  p.ground_truth = {{"t0", "s0"}, {"t1", "s1"}};
  p.instance_level = true;
  const auto swapped = matching_accuracy(result_of({pair("t0", "s1"), pair("t1", "s0")}), p);
  CHECK(swapped == MatchCount{0, 2, 2});
  p.instance_level = false;
  CHECK(matching_accuracy(result_of({pair("t0", "s1"), pair("t1", "s0")}), p).correct == 2);
}

TEST_CASE("pairs outside the problem are rejected") {
  MatchingProblem p;
  p.problem_id = "x";
  p.source_crops = {crop("s0", "A")};
  p.target_crops = {crop("t0", "A")};
  try {
    matching_accuracy(result_of({pair("t9", "s0")}), p);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ForeignCropId);
  }
}

TEST_CASE("random baseline approaches 1/n") {
  CHECK(random_baseline(1, 100, 0) == 100.0);
  for (std::size_t n : {2u, 5u, 8u, 20u}) {
    const double p = 1.0 / static_cast<double>(n);
    // Per-trial fixed-point fraction has variance (1/n^2) * 1 for n >= 2.
    const double sd = 100.0 / static_cast<double>(n) / std::sqrt(20000.0);
    CHECK(std::abs(random_baseline(n, 20000, n) - 100.0 * p) <= 4 * sd);
  }
  CHECK(random_baseline(8, 1000, 4) == random_baseline(8, 1000, 4));
}

TEST_CASE("wilson interval brackets the point estimate") {
  const auto all = wilson_interval(10, 10);
  CHECK(all.hi == 100.0);
  CHECK(all.lo == doctest::Approx(72.2467).epsilon(1e-4));
  const auto half = wilson_interval(50, 100);
  CHECK(half.lo == doctest::Approx(40.3832).epsilon(1e-4));
  CHECK(half.hi == doctest::Approx(59.6168).epsilon(1e-4));
  const auto none = wilson_interval(0, 0);
  CHECK(none.lo == 0.0);
  CHECK(none.hi == 100.0);
  for (std::size_t k = 0; k <= 20; ++k) {
    const auto w = wilson_interval(k, 20);
    CHECK(w.lo <= 5.0 * k);
    CHECK(w.hi >= 5.0 * k);
  }
}

TEST_CASE("report pools counts before dividing") {
  auto s = planted_setup(5, 30, 0);
  // Mix two settings so pooling spans problems of several sizes.
  for (std::size_t i = 0; i < s.problems.size(); i += 3) {
    s.problems[i].setting_tag = Setting::Hard;
    s.problems[i].source_crops.pop_back();
    s.problems[i].ground_truth.pop_back();
  }
  const auto report = run_benchmark(s.problems, s.methods, s.inputs, {});
  for (const auto& row : report.rows) {
    double weighted = 0.0;
    std::size_t weight = 0;
    for (const auto& p : s.problems) {
      if (std::string(to_string(p.setting_tag)) != row.setting) continue;
      const auto& m = *std::find_if(s.methods.begin(), s.methods.end(), [&](auto& x) { return x.name == row.method; });
      MatchCount c;
      if (m.kind == MethodKind::DiscreteN) {
        continue;
      }
      c = matching_accuracy(assign_hungarian(method_similarity(p, m, s.inputs)), p);
      weighted += c.possible ? 100.0 * c.correct / c.possible * c.possible : 0.0;
      weight += c.possible;
    }
    if (weight) CHECK(row.accuracy_pct == doctest::Approx(weighted / weight).epsilon(1e-12));
  }
  REQUIRE(report.find("visual", "hungarian", "hard") != nullptr);
  REQUIRE(report.find("discrete-n", "discrete", "nway") != nullptr);
  CHECK(report.find("visual", "argmax", "hard") == nullptr);
  CHECK(report.rows.size() == 8);
}

TEST_CASE("report is independent of the thread count") {
  const auto s = planted_setup(6, 40, 4);
  BenchmarkOptions opt;
  opt.assignments = {AssignmentMethod::Argmax, AssignmentMethod::Hungarian};
  opt.jobs = 1;
  const auto one = to_json(run_benchmark(s.problems, s.methods, s.inputs, opt));
  opt.jobs = 3;
  const auto three = to_json(run_benchmark(s.problems, s.methods, s.inputs, opt));
  CHECK(one == three);
  opt.config_text = "other";
  CHECK(run_benchmark(s.problems, s.methods, s.inputs, opt).config_digest !=
        run_benchmark(s.problems, s.methods, s.inputs, {}).config_digest);
}

TEST_CASE("semfeat-k with all labels present equals semfeat-n") {
  const auto s = planted_setup(8, 20, 0);
  const auto report = run_benchmark(s.problems, s.methods, s.inputs, {});
  const auto* n = report.find("semfeat-n", "hungarian", "nway");
  const auto* k = report.find("semfeat-k", "hungarian", "nway");
  REQUIRE(n);
  REQUIRE(k);
  CHECK(n->correct_matches == k->correct_matches);
  CHECK(n->possible_matches == 160);
}

TEST_CASE("semfeat-n restricts prompts to the target labels in prompt order") {
  const auto s = planted_setup(3, 1, 2);
  const auto& p = s.problems[0];
  const auto sub = present_label_prompts(p, s.planted.prompts);
  CHECK(sub.size() == 3);
  for (std::size_t i = 1; i < sub.size(); ++i) CHECK(sub.crop_ids[i - 1] < sub.crop_ids[i]);
  const auto sim = method_similarity(p, s.methods[1], s.inputs);
  CHECK(sim.targets() == 3);
  CHECK(sim.sources() == 3);
}

TEST_CASE("benchmark configuration errors") {
  const auto s = planted_setup(3, 2, 0);
  std::vector<MethodSpec> bad{{"x", MethodKind::SemFeatN, "vis", "missing"}};
  CHECK_THROWS_AS(run_benchmark(s.problems, bad, s.inputs, {}), Error);
  BenchmarkOptions opt;
  opt.assignments = {AssignmentMethod::Discrete};
  CHECK_THROWS_AS(run_benchmark(s.problems, s.methods, s.inputs, opt), Error);
  CHECK_THROWS_AS(run_benchmark(s.problems, std::vector<MethodSpec>{}, s.inputs, {}), Error);
}

TEST_CASE("report formatters") {
  const auto s = planted_setup(4, 5, 0);
  const auto report = run_benchmark(s.problems, s.methods, s.inputs, {});
  const auto json = to_json(report);
  CHECK(json.find("\"schema_version\": 1") != std::string::npos);
  CHECK(json.find("\"wilson_95_interval\"") != std::string::npos);
  const auto csv = to_csv(report);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(report.rows.size()));
  CHECK(to_text(report).find(report.config_digest) != std::string::npos);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("golden planted run reproduces its recorded counts") {
  PlantedPoolConfig cfg;
  cfg.classes = 8;
  cfg.distractor_classes = 32;
  cfg.dim = 64;
  cfg.intra_class_noise = 0.4;
  cfg.source_extra_noise = 0.8;
  cfg.seed = 1;
  const auto planted = gen_planted_pool(cfg);
  const auto problems = NwaySampler(planted.pool, {}).sample_batch(8, 7, 200);
  BenchmarkInputs inputs;
  inputs.features["planted"] = {&planted.degraded_crops, &planted.crops};
  inputs.prompts["concepts"] = &planted.prompts;
  const std::vector<MethodSpec> methods{{"visual", MethodKind::Visual, "planted", ""},
                                        {"semfeat-n", MethodKind::SemFeatN, "planted", "concepts"},
                                        {"semfeat-k", MethodKind::SemFeatK, "planted", "concepts"},
                                        {"discrete-n", MethodKind::DiscreteN, "planted", "concepts"},
                                        {"discrete-k", MethodKind::DiscreteK, "planted", "concepts"}};
  BenchmarkOptions opt;
  opt.assignments = {AssignmentMethod::Argmax, AssignmentMethod::Hungarian};
  const auto r = run_benchmark(problems, methods, inputs, opt);
  const std::vector<std::tuple<const char*, const char*, std::size_t>> golden{
      {"visual", "argmax", 289},    {"visual", "hungarian", 307},    {"semfeat-n", "argmax", 452},
      {"semfeat-n", "hungarian", 424}, {"semfeat-k", "argmax", 319}, {"semfeat-k", "hungarian", 352},
      {"discrete-n", "discrete", 429}, {"discrete-k", "discrete", 178}};
  for (const auto& [method, assignment, correct] : golden) {
    CAPTURE(method);
    CAPTURE(assignment);
    const auto* row = r.find(method, assignment, "nway");
    REQUIRE(row != nullptr);
    CHECK(row->correct_matches == correct);
    CHECK(row->possible_matches == 1600);
  }
}
