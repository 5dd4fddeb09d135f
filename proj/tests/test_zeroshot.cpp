#include <doctest.h>

#include <cmath>

#include "omatch/error.hpp"
#include "omatch/kernels.hpp"
#include "omatch/zeroshot.hpp"
#include "oracles.hpp"

using namespace omatch;

namespace {

ClassMatrix random_scores(Rng& rng, std::size_t rows, std::size_t classes, TruthMap& truth) {
  ClassMatrix c;
  c.entries = Matrix(rows, classes);
  for (std::size_t k = 0; k < classes; ++k) c.col_labels.push_back("c" + std::to_string(k));
  for (std::size_t i = 0; i < rows; ++i) {
    c.row_ids.push_back("r" + std::to_string(i));
    truth[c.row_ids.back()] = c.col_labels[rng.below(classes)];
    for (double& v : c.entries.row(i)) v = rng.uniform();
  }
  return c;
}

}  // namespace

TEST_CASE("expand_prompts template modes") {
  PromptSet p{{"stapler"}, {{"stapler", {"stapler"}}}, TemplateMode::Plain};
  CHECK(expand_prompts(p) == std::vector<ExpandedPrompt>{{"stapler", "stapler"}});
  p.template_mode = TemplateMode::PictureOf;
  CHECK(expand_prompts(p) == std::vector<ExpandedPrompt>{{"stapler", "A picture of a stapler"}});

  p.template_mode = TemplateMode::Ensemble;
  p.variants["stapler"] = {"stapler", "red stapler", "office stapler", "desk stapler", "metal stapler"};
  const auto e = expand_prompts(p);
  REQUIRE(e.size() == 20);
  CHECK(e[0].text == "A picture of a stapler");
  CHECK(e[1].text == "A picture of a stapler, a product");
  CHECK(e[2].text == "A stapler, a product");
  CHECK(e[3].text == "stapler");
  CHECK(e[4].text == "A picture of a red stapler");
  for (const auto& x : e) CHECK(x.label == "stapler");
}

TEST_CASE("expand_prompts requires descriptions for every class") {
  PromptSet p{{"a", "b"}, {{"a", {"x"}}, {"b", {}}}, TemplateMode::Plain};
  try {
    expand_prompts(p);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyVariantList);
  }
  p.variants.erase("b");
  CHECK_THROWS_AS(expand_prompts(p), Error);
}

TEST_CASE("ensemble_embed examples") {
  const auto one = normalize_set({{0.6, 0.8}}, {"p"}, "t");
  std::vector<std::string> labels{"A"};
  auto e = ensemble_embed(one, labels);
  CHECK(e.vectors(0, 0) == doctest::Approx(0.6));
  CHECK(e.crop_ids == labels);

  const auto dup = normalize_set({{0.6, 0.8}, {0.6, 0.8}}, {"p", "q"}, "t");
  std::vector<std::string> two{"A", "A"};
  e = ensemble_embed(dup, two);
  REQUIRE(e.size() == 1);
  CHECK(e.vectors(0, 1) == doctest::Approx(0.8));

  const auto basis = normalize_set({{1, 0}, {0, 1}}, {"p", "q"}, "t");
  e = ensemble_embed(basis, two);
  CHECK(std::abs(e.vectors(0, 0) - 0.7071) <= 1e-4);
  CHECK(std::abs(e.vectors(0, 1) - 0.7071) <= 1e-4);

  const auto opposite = normalize_set({{1, 0}, {-1, 0}}, {"p", "q"}, "t");
  try {
    ensemble_embed(opposite, two);
    FAIL("no throw");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::ZeroNormVector);
  }
}

TEST_CASE("ensemble output is unit norm and grouped by first appearance") {
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 1 + rng.below(12);
    const auto v = normalize_set(oracle::random_vectors(rng, rows, 5), {}, "t");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < rows; ++i) labels.push_back("L" + std::to_string(rng.below(3)));
    const auto e = ensemble_embed(v, labels);
    CHECK(e.crop_ids.front() == labels.front());
    for (std::size_t i = 0; i < e.size(); ++i)
      CHECK(std::abs(kernels::serial::l2_norm(e.vector(i)) - 1.0) <= 1e-6);
  }
}

TEST_CASE("class_prompt_embeddings looks prompts up by text") {
  PromptSet p{{"cup", "pen"}, {{"cup", {"cup", "mug"}}, {"pen", {"pen"}}}, TemplateMode::PictureOf};
  const auto text = normalize_set({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                                  {"A picture of a cup", "A picture of a mug", "A picture of a pen"}, "clip-text");
  const auto classes = class_prompt_embeddings(p, text);
  CHECK(classes.crop_ids == std::vector<std::string>{"cup", "pen"});
  CHECK(classes.vectors(0, 0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(classes.vectors(1, 2) == doctest::Approx(1.0));

  p.template_mode = TemplateMode::Plain;
  CHECK_THROWS_AS(class_prompt_embeddings(p, text), Error);
}

TEST_CASE("topk_accuracy examples") {
  ClassMatrix id{Matrix::identity(5), {}, {}};
  TruthMap truth;
  for (int i = 0; i < 5; ++i) {
    id.row_ids.push_back("r" + std::to_string(i));
    id.col_labels.push_back("c" + std::to_string(i));
    truth["r" + std::to_string(i)] = "c" + std::to_string(i);
  }
  CHECK(topk_accuracy(id, truth, 1) == 100.0);
  CHECK(topk_accuracy(id, truth, 5) == 100.0);

  // Ties rank by column index: a uniform row ranks c0 first.
  ClassMatrix flat{Matrix(1, 3, 0.5), {"r"}, {"c0", "c1", "c2"}};
  TruthMap t1{{"r", "c1"}};
  CHECK(topk_accuracy(flat, t1, 1) == 0.0);
  CHECK(topk_accuracy(flat, t1, 2) == 100.0);

  CHECK_THROWS_AS(topk_accuracy(id, truth, 6), Error);
  CHECK_THROWS_AS(topk_accuracy(id, truth, 0), Error);
  TruthMap bad{{"r0", "zzz"}};
  ClassMatrix single{Matrix{{1, 0}}, {"r0"}, {"c0", "c1"}};
  try {
    topk_accuracy(single, bad, 1);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownLabel);
  }
}

TEST_CASE("random scores give k/K accuracy within three binomial deviations") {
  Rng rng(39);
  const std::size_t rows = 10000, classes = 39;
  TruthMap truth;
  const auto c = random_scores(rng, rows, classes, truth);
  for (std::size_t k : {1u, 5u}) {
    const double p = static_cast<double>(k) / classes;
    const double sd = 100.0 * std::sqrt(p * (1 - p) / rows);
    CHECK(std::abs(topk_accuracy(c, truth, k) - 100.0 * p) <= 3 * sd);
  }
  CHECK(topk_accuracy(c, truth, classes) == 100.0);
}

TEST_CASE("topk is invariant to increasing transforms and ordered top1 <= top5") {
  Rng rng(40);
  TruthMap truth;
  auto c = random_scores(rng, 500, 12, truth);
  const auto before = classify(c, truth);
  for (double& v : c.entries.data()) v = std::log(v + 1e-3) * 7.0 + 2.0;
  const auto after = classify(c, truth);
  CHECK(before.top1_accuracy == after.top1_accuracy);
  CHECK(before.top5_accuracy == after.top5_accuracy);
  CHECK(after.top1_accuracy <= after.top5_accuracy);
  REQUIRE(after.ranked.size() == 500);
  CHECK(after.ranked[0].size() == 12);
  CHECK(after.ranked[0][0].score >= after.ranked[0][1].score);
}
