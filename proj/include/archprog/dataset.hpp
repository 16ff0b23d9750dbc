#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "archprog/pointcloud.hpp"
#include "archprog/procgen.hpp"
#include "archprog/tokens.hpp"

namespace archprog {

struct DatasetConfig {
    SynthConfig synth;
    AugmentSpec augment;
    /// Fresh sub-seeds tried per record before synthesis gives up.
    int record_attempts = 8;

    void check() const;
};

/// JSON form: {"seed", "record_attempts", "synth": {...}, "augment": {...}}.
/// Every key is optional; unknown keys and bad values throw ConfigError.
DatasetConfig dataset_config_from_json(std::string_view text);
/// Canonical JSON with every field spelled out.
std::string dataset_config_to_json(const DatasetConfig& cfg);
/// Throws IoError when unreadable and ConfigError when invalid.
DatasetConfig load_dataset_config(const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

/// One synthesized training example, in memory.
struct Sample {
    std::size_t index = 0;
    std::uint64_t seed = 0; ///< sub-seed of the successful attempt
    int attempts = 1;
    int tree_retries = 0;
    TreeTemplate shape = TreeTemplate::Single;
    Program program; ///< quantized
    TokenSequence tokens;
    Mesh mesh;
    PointCloud cloud;
    /// Error text per failed attempt.
    std::vector<std::string> failures;
};

/// Sub-seed for attempt `attempt` of record `index`.
std::uint64_t record_seed(std::uint64_t seed, std::size_t index, int attempt);

/// Synthesizes record `index`: tree, quantized program, tokens (checked to
/// round-trip), compiled mesh and augmented cloud. Throws GenerationError
/// once cfg.record_attempts sub-seeds have failed.
Sample synth_sample(const DatasetConfig& cfg, std::size_t index, std::span<const Polygon2D> pool = {});

struct Manifest {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::string config_hash;
    std::size_t points = 0;
    std::size_t layers = 0;
    std::map<std::string, std::size_t> templates;
    std::map<std::string, std::size_t> noise;
    std::size_t failed_attempts = 0;
    std::size_t tree_retries = 0;
    std::map<std::string, std::size_t> failure_kinds;
    std::string records_hash; ///< FNV-1a of records.jsonl
    std::string artifacts_hash; ///< FNV-1a over every OBJ and PLY, in record order

    std::string to_json() const;
};

/// Writes into `dir` (created if missing):
///   records.jsonl   one record per line
///   tokens.jsonl    {"id", "tokens"} per line
///   meshes/NNNNNN.obj, points/NNNNNN.ply
///   manifest.json
/// Records are synthesized in parallel from per-record sub-seeds, so the
/// output depends only on (cfg, n). Throws IoError on write failures.
Manifest synth_dataset(const DatasetConfig& cfg, std::size_t n, const std::string& dir);

/// Parsed line of records.jsonl.
struct DatasetRecord {
    std::string id;
    std::string program;
    TokenSequence tokens;
    std::string mesh;   ///< relative to the dataset directory
    std::string points; ///< relative to the dataset directory
    std::size_t n_points = 0;
    std::string noise;
    double noise_scale = 0.0;
    double incomplete_ratio = 0.0;
    int anchors = 0;
    std::uint64_t seed = 0;
    std::string shape;
};

std::vector<DatasetRecord> read_records(const std::string& dir);

/// `{"id": ..., "tokens": [...]}` per line.
struct TokenRecord {
    std::string id;
    TokenSequence tokens;
};
std::string token_record_json(const TokenRecord& r);
std::vector<TokenRecord> read_token_records(std::istream& is);

} // namespace archprog
