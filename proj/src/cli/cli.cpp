#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "omatch/benchgen.hpp"
#include "omatch/color_hist.hpp"
#include "omatch/embedstore.hpp"
#include "omatch/error.hpp"
#include "omatch/evalkit.hpp"
#include "omatch/zeroshot.hpp"
#include "raster.hpp"

namespace omatch::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

fs::path default_out_dir() {
  if (const char* env = std::getenv("OMATCH_OUT_DIR"); env && *env) return env;
  return ".";
}

// "name=path" pairs; a bare path takes its stem as the name.
std::map<std::string, fs::path> named_paths(const std::vector<std::string>& specs) {
  std::map<std::string, fs::path> out;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    const std::string name = eq == std::string::npos ? fs::path(spec).stem().string() : spec.substr(0, eq);
    const fs::path path = eq == std::string::npos ? fs::path(spec) : fs::path(spec.substr(eq + 1));
    if (name.empty()) throw CLI::ValidationError("features", "empty feature name in '" + spec + "'");
    if (!out.emplace(name, path).second) throw CLI::ValidationError("features", "feature '" + name + "' given twice");
  }
  return out;
}

void require_files(const std::vector<fs::path>& paths) {
  for (const auto& p : paths)
    if (!p.empty() && !fs::is_regular_file(p)) throw CLI::ValidationError("input", "file does not exist: " + p.string());
}

EmbeddingSet load_normalized(const fs::path& path) {
  EmbeddingSet set = store::read_embeddings(path);
  if (!set.normalized) set = normalize_set(std::move(set));
  return set;
}

std::set<std::string> read_whitelist(const fs::path& path) {
  std::set<std::string> labels;
  std::istringstream in(store::read_file(path));
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) labels.insert(line);
  }
  return labels;
}

// Resolved flags and input digests of one run. Worker count and output
// location appear in the echo but not in the digest text.
class ConfigEcho {
 public:
  explicit ConfigEcho(const CLI::App& sub) : subcommand_(sub.get_name()) {
    for (const CLI::Option* opt : sub.get_options()) {
      if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
      const auto& results = opt->results();
      if (results.empty() && opt->get_default_str().empty()) continue;
      ordered_json value;
      if (opt->get_expected_max() == 0)
        value = opt->count() > 0;
      else if (opt->get_items_expected_max() > 1 || results.size() > 1)
        value = results.empty() ? std::vector<std::string>{} : results;
      else
        value = results.empty() ? opt->get_default_str() : results.front();
      flags_[opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front()] = value;
    }
  }

  void add_file(const fs::path& path) {
    if (path.empty()) return;
    files_[path.string()] = fnv1a_hex(store::read_file(path));
  }

  // Text folded into report digests; excludes flags that cannot change results.
  std::string digest_text() const {
    ordered_json j = document();
    for (const char* name : {"jobs", "out"}) j["flags"].erase(name);
    return j.dump();
  }

  ordered_json document() const {
    ordered_json j;
    j["subcommand"] = subcommand_;
    j["flags"] = flags_;
    j["files"] = files_;
    return j;
  }

  void write(const fs::path& path) const { store::write_file_atomic(path, document().dump(2) + "\n"); }

 private:
  std::string subcommand_;
  ordered_json flags_ = ordered_json::object();
  ordered_json files_ = ordered_json::object();
};

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string mode;
  fs::path manifest;
  fs::path view_distance;
  fs::path whitelist;
  std::size_t n = 8;
  std::uint64_t seed = 0;
  std::size_t count = 1;
  fs::path out;
};

void add_gen(CLI::App& app, GenArgs& a) {
  auto* sub = app.add_subcommand("gen", "Generate matching problems from a crop manifest");
  sub->add_option("--mode", a.mode, "easy | medium | hard | hardest | nway")
      ->required()
      ->check(CLI::IsMember({"easy", "medium", "hard", "hardest", "nway"}));
  sub->add_option("--manifest", a.manifest, "Crop manifest (JSON Lines)")->required()->check(CLI::ExistingFile);
  sub->add_option("--view-distance", a.view_distance, "View distance table (easy/medium)")->check(CLI::ExistingFile);
  sub->add_option("--whitelist", a.whitelist, "Class labels for nway, one per line")->check(CLI::ExistingFile);
  sub->add_option("--n", a.n, "Objects per nway problem")->capture_default_str();
  sub->add_option("--seed", a.seed, "Seed (required for nway)");
  sub->add_option("--count", a.count, "Number of nway problems")->capture_default_str();
  sub->add_option("--out", a.out, "Output problem file (default $OMATCH_OUT_DIR/problems.jsonl)");
}

int cmd_gen(const CLI::App& sub, GenArgs& a, std::ostream& out, std::ostream& err) {
  const Setting mode = *parse_setting(a.mode);
  if (mode == Setting::Nway && sub.get_option("--seed")->count() == 0)
    throw CLI::ValidationError("--seed", "required for --mode nway");
  if ((mode == Setting::Easy || mode == Setting::Medium) && a.view_distance.empty())
    err << "warning: no --view-distance given; scenes with several views will fail\n";
  if (a.out.empty()) a.out = default_out_dir() / "problems.jsonl";

  ConfigEcho echo(sub);
  for (const auto& p : {a.manifest, a.view_distance, a.whitelist}) echo.add_file(p);

  const PoolManifest pool = store::read_pool(a.manifest, a.view_distance);
  pool.validate();
  std::vector<MatchingProblem> problems;
  std::size_t skipped = 0, trivial = 0;
  switch (mode) {
    case Setting::Easy:
    case Setting::Medium: {
      auto r = gen_same_scene_pairs(pool, mode);
      problems = std::move(r.problems);
      skipped = r.skipped_scenes;
      trivial = r.trivial_removed;
      break;
    }
    case Setting::Hard:
    case Setting::Hardest: {
      auto r = gen_cross_scene_pairs(pool, mode);
      problems = std::move(r.problems);
      trivial = r.trivial_removed;
      break;
    }
    case Setting::Nway: {
      const auto whitelist = a.whitelist.empty() ? std::set<std::string>{} : read_whitelist(a.whitelist);
      if (!whitelist.empty() && a.n > whitelist.size())
        throw Error(ErrorKind::NTooLarge, "n=" + std::to_string(a.n) + " with " + std::to_string(whitelist.size()) +
                                              " whitelisted classes");
      problems = NwaySampler(pool, whitelist).sample_batch(a.n, a.seed, a.count);
      break;
    }
  }

  if (!a.out.parent_path().empty()) fs::create_directories(a.out.parent_path());
  store::write_file_atomic(a.out, store::encode_problems(problems));
  echo.write(a.out.string() + ".config.json");
  if (problems.empty()) err << "warning: no problems generated for mode " << a.mode << "\n";
  if (skipped) err << "skipped " << skipped << " single-view scenes\n";
  if (trivial) err << "removed " << trivial << " single-object problems\n";
  out << a.mode << ": " << problems.size() << " problems -> " << a.out.string() << "\n";
  return kOk;
}

// ---- planted ---------------------------------------------------------------

struct PlantedArgs {
  PlantedPoolConfig cfg;
  fs::path out;
};

void add_planted(CLI::App& app, PlantedArgs& a) {
  auto* sub = app.add_subcommand("planted", "Write a synthetic planted-cluster pool with embeddings");
  sub->add_option("--classes", a.cfg.classes, "Classes owning crops")->capture_default_str();
  sub->add_option("--distractors", a.cfg.distractor_classes, "Extra prompt-only classes")->capture_default_str();
  sub->add_option("--crops-per-class", a.cfg.crops_per_class)->capture_default_str();
  sub->add_option("--dim", a.cfg.dim, "Embedding dimension")->capture_default_str();
  sub->add_option("--noise", a.cfg.intra_class_noise, "Per-crop noise length")->capture_default_str();
  sub->add_option("--source-noise", a.cfg.source_extra_noise, "Extra noise on the degraded copy")
      ->capture_default_str();
  sub->add_option("--seed", a.cfg.seed, "Seed")->required();
  sub->add_option("--out", a.out, "Output directory (default $OMATCH_OUT_DIR)");
}

int cmd_planted(const CLI::App& sub, PlantedArgs& a, std::ostream& out) {
  if (a.out.empty()) a.out = default_out_dir();
  fs::create_directories(a.out);
  const PlantedPool planted = gen_planted_pool(a.cfg);

  store::write_pool(planted.pool, a.out / "manifest.jsonl");
  store::write_embeddings(planted.crops, a.out / "crops.omes");
  store::write_embeddings(planted.degraded_crops, a.out / "crops_degraded.omes");
  PromptSet prompts;
  prompts.template_mode = TemplateMode::Plain;
  prompts.classes = planted.prompts.crop_ids;
  for (const auto& label : prompts.classes) prompts.variants[label] = {label};
  store::write_file_atomic(a.out / "prompts.json", store::encode_prompts(prompts));
  store::write_embeddings(planted.prompts, a.out / "prompt_text.omes");

  std::ostringstream whitelist;
  for (const auto& label : planted.crop_classes) whitelist << label << '\n';
  store::write_file_atomic(a.out / "whitelist.txt", whitelist.str());
  ConfigEcho(sub).write(a.out / "planted.config.json");
  out << "planted pool: " << planted.crops.size() << " crops, " << planted.prompts.size() << " prompts -> "
      << a.out.string() << "\n";
  return kOk;
}

// ---- match -----------------------------------------------------------------

struct MatchArgs {
  fs::path problems;
  std::vector<std::string> features;
  std::vector<std::string> source_features;
  fs::path prompts;
  fs::path prompt_embeddings;
  std::vector<std::string> methods{"visual"};
  std::string assignment = "hungarian";
  fs::path images;
  int hue_bins = 32;
  int sat_bins = 32;
  bool no_mask = false;
  bool softmax = false;
  int jobs = 0;
  fs::path out;
};

void add_match(CLI::App& app, MatchArgs& a) {
  auto* sub = app.add_subcommand("match", "Run matching methods over a problem file and report accuracy");
  sub->add_option("--problems", a.problems, "Problem file from 'gen'")->required()->check(CLI::ExistingFile);
  sub->add_option("--features", a.features, "Crop embeddings as name=path (repeatable)");
  sub->add_option("--source-features", a.source_features,
                  "Embeddings used for source crops instead, as name=path (repeatable)");
  sub->add_option("--prompts", a.prompts, "Prompt file")->check(CLI::ExistingFile);
  sub->add_option("--prompt-embeddings", a.prompt_embeddings,
                  "Text embeddings keyed by prompt text, or by class label without --prompts")
      ->check(CLI::ExistingFile);
  sub->add_option("--methods", a.methods,
                  "kind[:features] with kind in visual, colourhist, semfeat-n, semfeat-k, discrete-n, discrete-k")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--assignment", a.assignment, "argmax | hungarian | both")
      ->check(CLI::IsMember({"argmax", "hungarian", "both"}))
      ->capture_default_str();
  sub->add_option("--images", a.images, "Image root for colour histograms")->check(CLI::ExistingDirectory);
  sub->add_option("--hue-bins", a.hue_bins)->capture_default_str();
  sub->add_option("--sat-bins", a.sat_bins)->capture_default_str();
  sub->add_flag("--no-mask", a.no_mask, "Bin every pixel of the bounding box");
  sub->add_flag("--softmax", a.softmax, "Softmax the classification scores");
  sub->add_option("--jobs", a.jobs, "Worker threads (0 = all)")->capture_default_str();
  sub->add_option("--out", a.out, "Output directory (default $OMATCH_OUT_DIR)");
}

EmbeddingSet colour_histograms(const std::vector<MatchingProblem>& problems, const MatchArgs& a) {
  std::map<std::string, const CropRecord*> crops;
  for (const auto& p : problems) {
    for (const auto& c : p.source_crops) crops.emplace(c.crop_id, &c);
    for (const auto& c : p.target_crops) crops.emplace(c.crop_id, &c);
  }
  HistogramConfig cfg{a.hue_bins, a.sat_bins, !a.no_mask};
  EmbeddingSet set;
  set.provenance = "colourhist";
  set.normalized = true;
  set.vectors = Matrix(0, static_cast<std::size_t>(std::max(0, a.hue_bins + a.sat_bins)));
  for (const auto& [id, record] : crops) {
    set.vectors.push_row(hs_histogram(load_crop(*record, a.images), cfg).values);
    set.crop_ids.push_back(id);
  }
  return set;
}

int cmd_match(const CLI::App& sub, MatchArgs& a, std::ostream& out, std::ostream& err) {
  auto feature_paths = named_paths(a.features);
  auto source_paths = named_paths(a.source_features);
  std::vector<fs::path> inputs{a.problems, a.prompts, a.prompt_embeddings};
  for (const auto& [_, p] : feature_paths) inputs.push_back(p);
  for (const auto& [_, p] : source_paths) inputs.push_back(p);
  require_files(inputs);
  for (const auto& [name, _] : source_paths)
    if (!feature_paths.contains(name))
      throw CLI::ValidationError("--source-features", "'" + name + "' has no matching --features entry");

  std::vector<MethodSpec> methods;
  bool wants_prompts = false, wants_colour = false;
  for (const auto& token : a.methods) {
    const auto colon = token.find(':');
    const std::string kind = token.substr(0, colon);
    std::string features = colon == std::string::npos ? "" : token.substr(colon + 1);
    MethodSpec m;
    m.name = token;
    if (kind == "visual") m.kind = MethodKind::Visual;
    else if (kind == "colourhist") m.kind = MethodKind::Visual, features = "colourhist", wants_colour = true;
    else if (kind == "semfeat-n") m.kind = MethodKind::SemFeatN;
    else if (kind == "semfeat-k") m.kind = MethodKind::SemFeatK;
    else if (kind == "discrete-n") m.kind = MethodKind::DiscreteN;
    else if (kind == "discrete-k") m.kind = MethodKind::DiscreteK;
    else throw CLI::ValidationError("--methods", "unknown method '" + kind + "'");
    if (features.empty()) {
      if (feature_paths.size() != 1)
        throw CLI::ValidationError("--methods", "method '" + token + "' must name its feature set");
      features = feature_paths.begin()->first;
    }
    if (features != "colourhist" && !feature_paths.contains(features))
      throw CLI::ValidationError("--methods", "method '" + token + "' names unknown feature set '" + features + "'");
    m.features = features;
    if (m.kind != MethodKind::Visual) {
      m.prompts = "text";
      wants_prompts = true;
    }
    methods.push_back(std::move(m));
  }
  if (wants_prompts && a.prompt_embeddings.empty())
    throw CLI::ValidationError("--prompt-embeddings", "semantic methods need prompt embeddings");
  if (wants_colour && a.images.empty()) throw CLI::ValidationError("--images", "colourhist needs --images");

  ConfigEcho echo(sub);
  for (const auto& p : inputs) echo.add_file(p);

  const auto problems = store::decode_problems(store::read_file(a.problems));
  std::map<std::string, EmbeddingSet> loaded;
  BenchmarkInputs bench_inputs;
  for (const auto& [name, path] : feature_paths) loaded.emplace(name, load_normalized(path));
  for (const auto& [name, path] : source_paths) loaded.emplace("source:" + name, load_normalized(path));
  if (wants_colour) loaded.emplace("colourhist", colour_histograms(problems, a));
  for (const auto& [name, set] : loaded) {
    if (name.starts_with("source:")) continue;
    auto src = loaded.find("source:" + name);
    bench_inputs.features[name] =
        src == loaded.end() ? FeatureSource{&set, nullptr} : FeatureSource{&src->second, &set};
  }
  EmbeddingSet class_prompts;
  if (wants_prompts) {
    const EmbeddingSet text = load_normalized(a.prompt_embeddings);
    class_prompts = a.prompts.empty() ? text : class_prompt_embeddings(store::read_prompts(a.prompts), text);
    bench_inputs.prompts["text"] = &class_prompts;
  }

  BenchmarkOptions options;
  if (a.assignment == "both")
    options.assignments = {AssignmentMethod::Argmax, AssignmentMethod::Hungarian};
  else
    options.assignments = {*parse_assignment_method(a.assignment)};
  options.classify.softmax = a.softmax;
  options.jobs = a.jobs;
  options.config_text = echo.digest_text();

  const BenchmarkReport report = run_benchmark(problems, methods, bench_inputs, options);
  if (a.out.empty()) a.out = default_out_dir();
  fs::create_directories(a.out);
  store::write_file_atomic(a.out / "report.json", to_json(report));
  store::write_file_atomic(a.out / "report.csv", to_csv(report));
  store::write_file_atomic(a.out / "report.txt", to_text(report));
  echo.write(a.out / "report.config.json");
  out << to_text(report);
  err << problems.size() << " problems, reports in " << a.out.string() << "\n";
  return kOk;
}

// ---- classify --------------------------------------------------------------

struct ClassifyArgs {
  fs::path manifest;
  fs::path features;
  fs::path prompts;
  fs::path prompt_embeddings;
  std::string template_mode;
  bool softmax = false;
  fs::path out;
};

void add_classify(CLI::App& app, ClassifyArgs& a) {
  auto* sub = app.add_subcommand("classify", "Zero-shot top-1/top-5 classification of manifest crops");
  sub->add_option("--manifest", a.manifest, "Crop manifest with true labels")->required()->check(CLI::ExistingFile);
  sub->add_option("--features", a.features, "Crop embeddings")->required()->check(CLI::ExistingFile);
  sub->add_option("--prompts", a.prompts, "Prompt file")->required()->check(CLI::ExistingFile);
  sub->add_option("--prompt-embeddings", a.prompt_embeddings, "Text embeddings keyed by prompt text")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--template-mode", a.template_mode, "Override the prompt file: plain | picture_of | ensemble")
      ->check(CLI::IsMember({"plain", "picture_of", "ensemble"}));
  sub->add_flag("--softmax", a.softmax, "Softmax the classification scores");
  sub->add_option("--out", a.out, "Output directory (default $OMATCH_OUT_DIR)");
}

int cmd_classify(const CLI::App& sub, ClassifyArgs& a, std::ostream& out, std::ostream& err) {
  ConfigEcho echo(sub);
  for (const auto& p : {a.manifest, a.features, a.prompts, a.prompt_embeddings}) echo.add_file(p);

  const auto records = store::decode_manifest(store::read_file(a.manifest));
  PromptSet prompts = store::read_prompts(a.prompts);
  if (!a.template_mode.empty()) prompts.template_mode = *parse_template_mode(a.template_mode);

  const auto expanded = expand_prompts(prompts);
  std::map<std::string, std::size_t> per_class;
  for (const auto& e : expanded) ++per_class[e.label];
  for (const auto& label : prompts.classes) err << "class " << label << ": " << per_class[label] << " prompts\n";
  err << "mean prompts per class: " << std::fixed << std::setprecision(2)
      << static_cast<double>(expanded.size()) / static_cast<double>(prompts.classes.size()) << "\n";

  std::vector<std::string> ids;
  TruthMap truth;
  for (const auto& r : records) {
    ids.push_back(r.crop_id);
    truth[r.crop_id] = r.class_label;
  }
  const EmbeddingSet crops = load_normalized(a.features).select(ids);
  const EmbeddingSet classes = class_prompt_embeddings(prompts, load_normalized(a.prompt_embeddings));
  ClassifyOptions options;
  options.softmax = a.softmax;
  const auto outcome = classify(classify_matrix(crops, classes, options), truth);

  ordered_json j;
  j["schema_version"] = 1;
  j["template_mode"] = std::string(to_string(prompts.template_mode));
  j["classes"] = prompts.classes.size();
  j["prompts"] = expanded.size();
  j["crops"] = ids.size();
  j["top1_accuracy_pct"] = outcome.top1_accuracy;
  j["top5_accuracy_pct"] = outcome.top5_accuracy;
  j["predictions"] = ordered_json::array();
  for (std::size_t i = 0; i < outcome.row_ids.size(); ++i) {
    ordered_json row;
    row["crop_id"] = outcome.row_ids[i];
    row["label"] = truth[outcome.row_ids[i]];
    row["predicted"] = outcome.ranked[i].front().label;
    row["score"] = outcome.ranked[i].front().score;
    j["predictions"].push_back(std::move(row));
  }
  if (a.out.empty()) a.out = default_out_dir();
  fs::create_directories(a.out);
  store::write_file_atomic(a.out / "classify.json", j.dump(2) + "\n");
  echo.write(a.out / "classify.config.json");
  out << std::fixed << std::setprecision(4) << "top1 " << outcome.top1_accuracy << "\ntop5 "
      << outcome.top5_accuracy << "\n";
  return kOk;
}

// ---- prompt-report ---------------------------------------------------------

struct PromptReportArgs {
  fs::path features;
  fs::path prompt_embeddings;
  std::vector<std::string> crops;
  std::vector<std::string> prompts;
  std::size_t top = 0;
};

void add_prompt_report(CLI::App& app, PromptReportArgs& a) {
  auto* sub = app.add_subcommand("prompt-report", "Crop x prompt cosine table, best prompts first");
  sub->add_option("--features", a.features, "Crop embeddings")->required()->check(CLI::ExistingFile);
  sub->add_option("--prompt-embeddings", a.prompt_embeddings, "Text embeddings keyed by prompt text")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--crop", a.crops, "Reference crop id (repeatable; default all)");
  sub->add_option("--prompt", a.prompts, "Candidate prompt text (repeatable; default all)");
  sub->add_option("--top", a.top, "Rows per crop (0 = all)")->capture_default_str();
}

int cmd_prompt_report(PromptReportArgs& a, std::ostream& out) {
  EmbeddingSet crops = load_normalized(a.features);
  EmbeddingSet texts = load_normalized(a.prompt_embeddings);
  if (!a.crops.empty()) crops = crops.select(a.crops);
  if (!a.prompts.empty()) texts = texts.select(a.prompts);
  const ClassMatrix c = classify_matrix(crops, texts);
  out << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < c.row_ids.size(); ++i) {
    const auto order = rank_row(c.entries.row(i));
    const std::size_t rows = a.top ? std::min(a.top, order.size()) : order.size();
    for (std::size_t r = 0; r < rows; ++r)
      out << c.row_ids[i] << '\t' << c.entries(i, order[r]) << '\t' << c.col_labels[order[r]] << '\n';
  }
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NTooLarge:
    case ErrorKind::InvalidConfig:
    case ErrorKind::MethodConfigError:
      return kUsage;
    default:
      return kData;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Object matching benchmark harness"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  GenArgs gen;
  PlantedArgs planted;
  MatchArgs match;
  ClassifyArgs cls;
  PromptReportArgs report;
  add_gen(app, gen);
  add_planted(app, planted);
  add_match(app, match);
  add_classify(app, cls);
  add_prompt_report(app, report);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "gen") return cmd_gen(*sub, gen, out, err);
    if (name == "planted") return cmd_planted(*sub, planted, out);
    if (name == "match") return cmd_match(*sub, match, out, err);
    if (name == "classify") return cmd_classify(*sub, cls, out, err);
    return cmd_prompt_report(report, out);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace omatch::cli
