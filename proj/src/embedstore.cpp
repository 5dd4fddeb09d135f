#include "omatch/embedstore.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "omatch/error.hpp"
#include "omatch/kernels.hpp"

namespace omatch::store {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kFixedHeaderBytes = 4 + 6 * 4;

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorKind::InvalidSet, std::string(what) + " does not fit in 32 bits");
  return static_cast<std::uint32_t>(v);
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  std::array<std::uint8_t, 4> b{};
  store_u32_le(v, b);
  out.insert(out.end(), b.begin(), b.end());
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return load_u32_le(bytes.subspan(offset).first<4>());
}

ordered_json parse_json(std::string_view text, const std::string& what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, what + ": " + e.what());
  }
}

template <typename T>
T field(const ordered_json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::ParseError, where + ": missing field '" + key + "'");
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, where + ": field '" + key + "': " + e.what());
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) out.push_back(line);
    start = end + 1;
  }
  return out;
}

const char* const kRecordFields[] = {"crop_id", "image_id", "scene_id", "view_id",
                                     "setting", "class_label", "bbox", "area_px"};

ordered_json record_to_json(const CropRecord& r) {
  ordered_json j;
  j["crop_id"] = r.crop_id;
  j["image_id"] = r.image_id;
  j["scene_id"] = r.scene_id;
  j["view_id"] = r.view_id;
  j["setting"] = r.setting;
  j["class_label"] = r.class_label;
  j["bbox"] = {r.bbox.x, r.bbox.y, r.bbox.w, r.bbox.h};
  j["area_px"] = r.area_px;
  for (const auto& [key, raw] : r.extra) j[key] = ordered_json::parse(raw);
  return j;
}

CropRecord record_from_json(const ordered_json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, where + ": crop record must be an object");
  CropRecord r;
  r.crop_id = field<std::string>(j, "crop_id", where);
  r.image_id = field<std::string>(j, "image_id", where);
  r.scene_id = field<std::string>(j, "scene_id", where);
  r.view_id = field<int>(j, "view_id", where);
  r.setting = field<std::string>(j, "setting", where);
  r.class_label = field<std::string>(j, "class_label", where);
  const auto bbox = field<std::vector<int>>(j, "bbox", where);
  if (bbox.size() != 4) throw Error(ErrorKind::ParseError, where + ": bbox must hold x, y, w, h");
  r.bbox = {bbox[0], bbox[1], bbox[2], bbox[3]};
  r.area_px = field<std::int64_t>(j, "area_px", where);
  if (r.area_px < 1) throw Error(ErrorKind::ParseError, where + ": area_px must be at least 1");
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kRecordFields), std::end(kRecordFields), key) != std::end(kRecordFields)) continue;
    r.extra.emplace(key, value.dump());
  }
  return r;
}

}  // namespace

std::uint32_t load_u32_le(std::span<const std::uint8_t, 4> b) noexcept {
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

void store_u32_le(std::uint32_t v, std::span<std::uint8_t, 4> b) noexcept {
  b[0] = static_cast<std::uint8_t>(v);
  b[1] = static_cast<std::uint8_t>(v >> 8);
  b[2] = static_cast<std::uint8_t>(v >> 16);
  b[3] = static_cast<std::uint8_t>(v >> 24);
}

float load_f32_le(std::span<const std::uint8_t, 4> b) noexcept { return std::bit_cast<float>(load_u32_le(b)); }

void store_f32_le(float v, std::span<std::uint8_t, 4> b) noexcept { store_u32_le(std::bit_cast<std::uint32_t>(v), b); }

std::vector<std::uint8_t> encode_embeddings(const EmbeddingSet& set) {
  if (set.vectors.rows() != set.crop_ids.size())
    throw Error(ErrorKind::InvalidSet, "vector count differs from crop id count");
  if (set.provenance.empty()) throw Error(ErrorKind::InvalidSet, "provenance is mandatory");
  if (set.normalized) {
    for (std::size_t i = 0; i < set.size(); ++i)
      if (std::abs(kernels::serial::l2_norm(set.vector(i)) - 1.0) > kNormTolerance)
        throw Error(ErrorKind::InvalidSet, "row " + std::to_string(i) + " is flagged normalized but is not unit length");
  }

  std::vector<std::uint8_t> out;
  out.reserve(kFixedHeaderBytes + set.provenance.size() + set.vectors.data().size() * 4);
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  put_u32(out, kVersion);
  put_u32(out, checked_u32(set.size(), "count"));
  put_u32(out, checked_u32(set.dim(), "dim"));
  put_u32(out, kDtypeF32);
  put_u32(out, set.normalized ? 1 : 0);
  put_u32(out, checked_u32(set.provenance.size(), "provenance length"));
  out.insert(out.end(), set.provenance.begin(), set.provenance.end());
  for (double v : set.vectors.data()) {
    if (!std::isfinite(v) || std::abs(v) > std::numeric_limits<float>::max())
      throw Error(ErrorKind::InvalidSet, "value not representable as a finite 32-bit float");
    std::array<std::uint8_t, 4> b{};
    store_f32_le(static_cast<float>(v), b);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

EmbeddingFileHeader decode_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin(),
                                      [](char m, std::uint8_t b) { return static_cast<std::uint8_t>(m) == b; }))
    throw Error(ErrorKind::BadMagic, "not an embedding file");
  if (bytes.size() < kFixedHeaderBytes) throw Error(ErrorKind::TruncatedPayload, "header is incomplete");
  EmbeddingFileHeader h;
  h.version = get_u32(bytes, 4);
  if (h.version != kVersion) throw Error(ErrorKind::UnsupportedVersion, "version " + std::to_string(h.version));
  h.count = get_u32(bytes, 8);
  h.dim = get_u32(bytes, 12);
  h.dtype = get_u32(bytes, 16);
  if (h.dtype != kDtypeF32) throw Error(ErrorKind::UnsupportedDtype, "dtype " + std::to_string(h.dtype));
  h.normalized = get_u32(bytes, 20);
  if (h.normalized > 1) throw Error(ErrorKind::ParseError, "normalized flag must be 0 or 1");
  const std::uint32_t prov_len = get_u32(bytes, 24);
  if (bytes.size() - kFixedHeaderBytes < prov_len) throw Error(ErrorKind::TruncatedPayload, "provenance is cut short");
  h.provenance.assign(reinterpret_cast<const char*>(bytes.data() + kFixedHeaderBytes), prov_len);
  return h;
}

EmbeddingSet decode_embeddings(std::span<const std::uint8_t> bytes) {
  const EmbeddingFileHeader h = decode_header(bytes);
  const std::size_t offset = kFixedHeaderBytes + h.provenance.size();
  const std::uint64_t payload = std::uint64_t{h.count} * h.dim * 4;
  const std::uint64_t available = bytes.size() - offset;
  if (available < payload)
    throw Error(ErrorKind::TruncatedPayload, "payload holds " + std::to_string(available) + " of " +
                                                 std::to_string(payload) + " bytes");
  if (available > payload)
    throw Error(ErrorKind::ParseError, std::to_string(available - payload) + " trailing bytes after payload");

  EmbeddingSet set;
  set.provenance = h.provenance;
  set.normalized = h.normalized == 1;
  set.vectors = Matrix(h.count, h.dim);
  auto out = set.vectors.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const float f = load_f32_le(bytes.subspan(offset + 4 * i).first<4>());
    if (!std::isfinite(f))
      throw Error(ErrorKind::NonFiniteInput, "row " + std::to_string(i / std::max<std::size_t>(h.dim, 1)) +
                                                 " holds a non-finite value");
    out[i] = f;
  }
  for (std::uint32_t r = 0; r < h.count; ++r) set.crop_ids.push_back(std::to_string(r));
  if (set.normalized)
    for (std::size_t r = 0; r < set.size(); ++r) {
      const double norm = kernels::serial::l2_norm(set.vector(r));
      if (std::abs(norm - 1.0) > kStoredNormTolerance)
        throw Error(ErrorKind::NormViolation, "row " + std::to_string(r) + " has norm " + std::to_string(norm));
    }
  return set;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::IoError, "read failed for " + path.string());
  return std::move(buf).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot create " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot move " + tmp.string() + " into place: " + ec.message());
}

void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
  const auto bytes = encode_embeddings(set);
  std::string idx;
  for (std::size_t r = 0; r < set.size(); ++r) {
    ordered_json line;
    line["crop_id"] = set.crop_ids[r];
    line["row"] = r;
    idx += line.dump() + "\n";
  }
  auto idx_path = path;
  idx_path += ".idx";
  write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  write_file_atomic(idx_path, idx);
}

EmbeddingSet read_embeddings(const std::filesystem::path& path) {
  const std::string raw = read_file(path);
  EmbeddingSet set = decode_embeddings(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));

  auto idx_path = path;
  idx_path += ".idx";
  const std::string idx = read_file(idx_path);
  const auto lines = lines_of(idx);
  if (lines.size() != set.size())
    throw Error(ErrorKind::InvalidSet, idx_path.string() + " lists " + std::to_string(lines.size()) +
                                           " rows, header says " + std::to_string(set.size()));
  std::vector<char> seen(set.size(), 0);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = idx_path.string() + ":" + std::to_string(i + 1);
    const auto j = parse_json(lines[i], where);
    const auto row = field<std::size_t>(j, "row", where);
    if (row >= set.size() || seen[row]) throw Error(ErrorKind::InvalidSet, where + ": bad or repeated row");
    seen[row] = 1;
    set.crop_ids[row] = field<std::string>(j, "crop_id", where);
  }
  return set;
}

std::string encode_manifest(std::span<const CropRecord> records) {
  std::string out;
  for (const auto& r : records) out += record_to_json(r).dump() + "\n";
  return out;
}

std::vector<CropRecord> decode_manifest(std::string_view text) {
  std::vector<CropRecord> out;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = "manifest line " + std::to_string(i + 1);
    out.push_back(record_from_json(parse_json(lines[i], where), where));
  }
  return out;
}

std::string encode_view_distance(const std::map<std::string, double>& distances) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : distances) j[k] = v;
  return j.dump(2) + "\n";
}

std::map<std::string, double> decode_view_distance(std::string_view text) {
  const auto j = parse_json(text, "view distance file");
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "view distance file must be an object");
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw Error(ErrorKind::ParseError, "view distance '" + k + "' is not a number");
    out.emplace(k, v.get<double>());
  }
  return out;
}

PoolManifest read_pool(const std::filesystem::path& manifest, const std::filesystem::path& view_distance) {
  PoolManifest pool;
  pool.records = decode_manifest(read_file(manifest));
  if (!view_distance.empty()) pool.view_distance = decode_view_distance(read_file(view_distance));
  pool.validate();
  return pool;
}

void write_pool(const PoolManifest& pool, const std::filesystem::path& manifest,
                const std::filesystem::path& view_distance) {
  write_file_atomic(manifest, encode_manifest(pool.records));
  if (!view_distance.empty()) write_file_atomic(view_distance, encode_view_distance(pool.view_distance));
}

std::string encode_prompts(const PromptSet& prompts) {
  ordered_json j;
  j["template_mode"] = std::string(to_string(prompts.template_mode));
  j["classes"] = ordered_json::object();
  for (const auto& label : prompts.classes) j["classes"][label] = prompts.variants.at(label);
  return j.dump(2) + "\n";
}

PromptSet decode_prompts(std::string_view text) {
  const auto j = parse_json(text, "prompt file");
  PromptSet p;
  const auto mode = field<std::string>(j, "template_mode", "prompt file");
  const auto parsed = parse_template_mode(mode);
  if (!parsed) throw Error(ErrorKind::ParseError, "unknown template_mode '" + mode + "'");
  p.template_mode = *parsed;
  auto classes = j.find("classes");
  if (classes == j.end() || !classes->is_object())
    throw Error(ErrorKind::ParseError, "prompt file needs a 'classes' object");
  for (const auto& [label, list] : classes->items()) {
    if (!list.is_array()) throw Error(ErrorKind::ParseError, "descriptions of '" + label + "' must be a list");
    p.classes.push_back(label);
    p.variants[label] = list.get<std::vector<std::string>>();
  }
  p.validate();
  return p;
}

PromptSet read_prompts(const std::filesystem::path& path) { return decode_prompts(read_file(path)); }

std::string encode_problems(std::span<const MatchingProblem> problems) {
  std::string out;
  for (const auto& p : problems) {
    ordered_json j;
    j["problem_id"] = p.problem_id;
    j["setting"] = std::string(to_string(p.setting_tag));
    j["instance_level"] = p.instance_level;
    j["source"] = ordered_json::array();
    for (const auto& c : p.source_crops) j["source"].push_back(record_to_json(c));
    j["target"] = ordered_json::array();
    for (const auto& c : p.target_crops) j["target"].push_back(record_to_json(c));
    j["ground_truth"] = ordered_json::array();
    for (const auto& [t, s] : p.ground_truth) j["ground_truth"].push_back({t, s});
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<MatchingProblem> decode_problems(std::string_view text) {
  std::vector<MatchingProblem> out;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = "problem line " + std::to_string(i + 1);
    const auto j = parse_json(lines[i], where);
    MatchingProblem p;
    p.problem_id = field<std::string>(j, "problem_id", where);
    const auto setting = parse_setting(field<std::string>(j, "setting", where));
    if (!setting) throw Error(ErrorKind::ParseError, where + ": unknown setting");
    p.setting_tag = *setting;
    p.instance_level = field<bool>(j, "instance_level", where);
    for (const auto& c : field<ordered_json>(j, "source", where)) p.source_crops.push_back(record_from_json(c, where));
    for (const auto& c : field<ordered_json>(j, "target", where)) p.target_crops.push_back(record_from_json(c, where));
    for (const auto& pair : field<std::vector<std::vector<std::string>>>(j, "ground_truth", where)) {
      if (pair.size() != 2) throw Error(ErrorKind::ParseError, where + ": ground-truth entries are [target, source]");
      p.ground_truth.emplace_back(pair[0], pair[1]);
    }
    validate_problem(p);
    out.push_back(std::move(p));
  }
  return out;
}

BenchmarkReport decode_report(std::string_view json) {
  const auto j = parse_json(json, "report");
  if (field<int>(j, "schema_version", "report") != BenchmarkReport::kSchemaVersion)
    throw Error(ErrorKind::UnsupportedVersion, "report schema");
  BenchmarkReport r;
  r.config_digest = field<std::string>(j, "config_digest", "report");
  for (const auto& row : field<ordered_json>(j, "rows", "report")) {
    ReportRow out;
    out.method = field<std::string>(row, "method", "report row");
    out.assignment = field<std::string>(row, "assignment", "report row");
    out.setting = field<std::string>(row, "setting", "report row");
    out.correct_matches = field<std::size_t>(row, "correct_matches", "report row");
    out.possible_matches = field<std::size_t>(row, "possible_matches", "report row");
    out.label_correct_matches = field<std::size_t>(row, "label_correct_matches", "report row");
    out.accuracy_pct = field<double>(row, "accuracy_pct", "report row");
    out.problem_count = field<std::size_t>(row, "problem_count", "report row");
    const auto ci = field<std::vector<double>>(row, "wilson_95_interval", "report row");
    if (ci.size() != 2) throw Error(ErrorKind::ParseError, "wilson interval needs two bounds");
    out.wilson_95 = {ci[0], ci[1]};
    r.rows.push_back(std::move(out));
  }
  return r;
}

}  // namespace omatch::store
