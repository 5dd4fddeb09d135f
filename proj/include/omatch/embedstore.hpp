#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "omatch/benchgen.hpp"
#include "omatch/embed.hpp"
#include "omatch/evalkit.hpp"
#include "omatch/zeroshot.hpp"

namespace omatch::store {

// Embedding file layout, all integers little-endian:
//   "OMES" | u32 version=1 | u32 count | u32 dim | u32 dtype (0 = f32 LE)
//   | u32 normalized (0/1) | u32 provenance_len | provenance (UTF-8)
//   | count * dim f32 values, row-major
// Crop ids live in a JSON Lines sidecar at <path>.idx: {"crop_id": ..., "row": ...}.
inline constexpr std::array<char, 4> kMagic{'O', 'M', 'E', 'S'};
inline constexpr std::uint32_t kVersion = 1;
inline constexpr std::uint32_t kDtypeF32 = 0;
// Norm check applied to files flagged normalized; looser than kNormTolerance
// because the values went through 32-bit storage.
inline constexpr double kStoredNormTolerance = 1e-4;

struct EmbeddingFileHeader {
  std::uint32_t version = kVersion;
  std::uint32_t count = 0;
  std::uint32_t dim = 0;
  std::uint32_t dtype = kDtypeF32;
  std::uint32_t normalized = 0;
  std::string provenance;
};

// Host-independent little-endian codecs.
std::uint32_t load_u32_le(std::span<const std::uint8_t, 4> bytes) noexcept;
void store_u32_le(std::uint32_t value, std::span<std::uint8_t, 4> bytes) noexcept;
float load_f32_le(std::span<const std::uint8_t, 4> bytes) noexcept;
void store_f32_le(float value, std::span<std::uint8_t, 4> bytes) noexcept;

std::vector<std::uint8_t> encode_embeddings(const EmbeddingSet& set);
// Decodes the binary part; crop ids are left as row numbers.
EmbeddingSet decode_embeddings(std::span<const std::uint8_t> bytes);
EmbeddingFileHeader decode_header(std::span<const std::uint8_t> bytes);

void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);
EmbeddingSet read_embeddings(const std::filesystem::path& path);

// Writes via a temporary sibling and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

// Crop manifest: JSON Lines, one CropRecord per line. Unknown fields survive a round trip.
std::string encode_manifest(std::span<const CropRecord> records);
std::vector<CropRecord> decode_manifest(std::string_view text);
PoolManifest read_pool(const std::filesystem::path& manifest, const std::filesystem::path& view_distance = {});
void write_pool(const PoolManifest& pool, const std::filesystem::path& manifest,
                const std::filesystem::path& view_distance = {});

// View distances: one JSON object keyed "sceneId/viewA/viewB".
std::string encode_view_distance(const std::map<std::string, double>& distances);
std::map<std::string, double> decode_view_distance(std::string_view text);

// Prompt file: {"template_mode": "...", "classes": {"label": ["description", ...], ...}}.
// Class order follows the document.
std::string encode_prompts(const PromptSet& prompts);
PromptSet decode_prompts(std::string_view text);
PromptSet read_prompts(const std::filesystem::path& path);

// Problem file: JSON Lines, one MatchingProblem per line with crops inline.
std::string encode_problems(std::span<const MatchingProblem> problems);
std::vector<MatchingProblem> decode_problems(std::string_view text);

BenchmarkReport decode_report(std::string_view json);

}  // namespace omatch::store
