#include "archprog/dataset.hpp"

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "archprog/compiler.hpp"
#include "archprog/error.hpp"

namespace archprog {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void reject_unknown(const json& obj, const char* where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
    const std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
        if (!known.count(k)) throw ConfigError("unknown key \"" + k + "\" in " + where);
}

template <typename T>
void take(const json& obj, const char* key, T& dst) {
    if (auto it = obj.find(key); it != obj.end()) dst = it->get<T>();
}

void read_validator(const json& j, ContourValidatorSpec& v) {
    reject_unknown(j, "validator", {"min_angle_deg", "max_angle_deg", "max_edge_ratio", "min_area_ratio", "max_area_ratio"});
    take(j, "min_angle_deg", v.min_angle_deg);
    take(j, "max_angle_deg", v.max_angle_deg);
    take(j, "max_edge_ratio", v.max_edge_ratio);
    take(j, "min_area_ratio", v.min_area_ratio);
    take(j, "max_area_ratio", v.max_area_ratio);
}

void read_synth(const json& j, SynthConfig& s) {
    reject_unknown(j, "synth", {"template_weights", "max_layers", "max_depth", "height_lo", "height_hi", "m_weights",
                                "footprint_file", "contract_lo", "contract_hi", "max_attempts", "tree_retries",
                                "max_vertices", "validator"});
    if (auto it = j.find("template_weights"); it != j.end()) {
        if (!it->is_object()) throw ConfigError("template_weights must map template names to weights");
        for (const auto& [name, w] : it->items()) {
            const auto t = template_from_name(name);
            if (!t) throw ConfigError("unknown template \"" + name + "\"");
            s.template_weights[static_cast<std::size_t>(*t)] = w.get<double>();
        }
    }
    take(j, "max_layers", s.max_layers);
    take(j, "max_depth", s.max_depth);
    take(j, "height_lo", s.height_lo);
    take(j, "height_hi", s.height_hi);
    if (auto it = j.find("m_weights"); it != j.end()) {
        if (!it->is_array() || it->size() != 3) throw ConfigError("m_weights must list 3 weights");
        for (std::size_t i = 0; i < 3; ++i) s.m_weights[i] = (*it)[i].get<double>();
    }
    take(j, "footprint_file", s.footprint_file);
    take(j, "contract_lo", s.contract_lo);
    take(j, "contract_hi", s.contract_hi);
    take(j, "max_attempts", s.max_attempts);
    take(j, "tree_retries", s.tree_retries);
    take(j, "max_vertices", s.max_vertices);
    if (auto it = j.find("validator"); it != j.end()) read_validator(*it, s.validator);
}

void read_augment(const json& j, AugmentSpec& a) {
    reject_unknown(j, "augment", {"n_lo", "n_hi", "oversample", "weight_lo", "weight_hi", "r_lo", "r_hi", "anchors_lo",
                                  "anchors_hi", "noise_kinds", "noise_scale"});
    take(j, "n_lo", a.n_lo);
    take(j, "n_hi", a.n_hi);
    take(j, "oversample", a.oversample);
    take(j, "weight_lo", a.weight_lo);
    take(j, "weight_hi", a.weight_hi);
    take(j, "r_lo", a.r_lo);
    take(j, "r_hi", a.r_hi);
    take(j, "anchors_lo", a.anchors_lo);
    take(j, "anchors_hi", a.anchors_hi);
    if (auto it = j.find("noise_kinds"); it != j.end()) {
        if (!it->is_array()) throw ConfigError("noise_kinds must be an array of names");
        a.noise_kinds.clear();
        for (const json& n : *it) {
            const auto k = noise_from_name(n.get<std::string>());
            if (!k) throw ConfigError("unknown noise kind " + n.dump());
            a.noise_kinds.push_back(*k);
        }
    }
    take(j, "noise_scale", a.noise_scale);
}

std::string failure_kind(const std::exception& e) {
    if (dynamic_cast<const GenerationError*>(&e)) return "generation";
    if (dynamic_cast<const GeometryError*>(&e)) return "geometry";
    if (dynamic_cast<const TokenError*>(&e)) return "token";
    return "other";
}

std::string record_id(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06zu", i);
    return buf;
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream os(path, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw IoError("cannot write " + path.string());
}

struct Written {
    std::string record_line;
    std::string token_line;
    std::uint64_t artifact_hash = 0;
    std::size_t points = 0;
    std::size_t layers = 0;
    std::string shape;
    std::string noise;
    int tree_retries = 0;
    std::vector<std::string> failure_kinds;
};

Written write_sample(const Sample& s, const fs::path& dir) {
    const std::string id = record_id(s.index);
    const std::string mesh_rel = "meshes/" + id + ".obj";
    const std::string points_rel = "points/" + id + ".ply";

    std::ostringstream obj, ply;
    write_obj(obj, s.mesh);
    write_ply(ply, s.cloud.points);
    write_file(dir / mesh_rel, obj.str());
    write_file(dir / points_rel, ply.str());

    ordered_json r;
    r["id"] = id;
    r["program"] = print_program(s.program);
    r["tokens"] = s.tokens;
    r["mesh"] = mesh_rel;
    r["points"] = points_rel;
    r["meta"] = {{"n_points", s.cloud.points.size()},
                 {"noise", noise_name(s.cloud.meta.noise)},
                 {"noise_scale", s.cloud.meta.noise_scale},
                 {"incomplete_ratio", s.cloud.meta.incomplete_ratio},
                 {"anchors", s.cloud.meta.anchors},
                 {"seed", s.seed},
                 {"template", template_name(s.shape)},
                 {"attempts", s.attempts}};

    Written w;
    w.record_line = r.dump() + "\n";
    w.token_line = token_record_json({id, s.tokens}) + "\n";
    w.artifact_hash = fnv1a(ply.str(), fnv1a(obj.str()));
    w.points = s.cloud.points.size();
    w.layers = s.program.layers.size();
    w.shape = template_name(s.shape);
    w.noise = noise_name(s.cloud.meta.noise);
    w.tree_retries = s.tree_retries;
    for (const std::string& f : s.failures) w.failure_kinds.push_back(f.substr(0, f.find(':')));
    return w;
}

} // namespace

void DatasetConfig::check() const {
    synth.check();
    augment.check();
    if (record_attempts < 1) throw ConfigError("record_attempts must be positive");
    if (synth.max_vertices > GrammarLimits{}.max_points)
        throw ConfigError("max_vertices exceeds the grammar's point limit");
}

DatasetConfig dataset_config_from_json(std::string_view text) {
    DatasetConfig cfg;
    try {
        const json j = json::parse(text);
        reject_unknown(j, "config", {"seed", "record_attempts", "synth", "augment"});
        take(j, "seed", cfg.synth.seed);
        take(j, "record_attempts", cfg.record_attempts);
        if (auto it = j.find("synth"); it != j.end()) read_synth(*it, cfg.synth);
        if (auto it = j.find("augment"); it != j.end()) read_augment(*it, cfg.augment);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    cfg.check();
    return cfg;
}

std::string dataset_config_to_json(const DatasetConfig& cfg) {
    const SynthConfig& s = cfg.synth;
    const AugmentSpec& a = cfg.augment;
    ordered_json weights;
    for (std::size_t i = 0; i < kTemplateCount; ++i)
        weights[template_name(static_cast<TreeTemplate>(i))] = s.template_weights[i];
    std::vector<std::string> kinds;
    for (NoiseKind k : a.noise_kinds) kinds.push_back(noise_name(k));

    ordered_json j;
    j["seed"] = s.seed;
    j["record_attempts"] = cfg.record_attempts;
    j["synth"] = {{"template_weights", weights},
                  {"max_layers", s.max_layers},
                  {"max_depth", s.max_depth},
                  {"height_lo", s.height_lo},
                  {"height_hi", s.height_hi},
                  {"m_weights", s.m_weights},
                  {"footprint_file", s.footprint_file},
                  {"contract_lo", s.contract_lo},
                  {"contract_hi", s.contract_hi},
                  {"max_attempts", s.max_attempts},
                  {"tree_retries", s.tree_retries},
                  {"max_vertices", s.max_vertices},
                  {"validator",
                   {{"min_angle_deg", s.validator.min_angle_deg},
                    {"max_angle_deg", s.validator.max_angle_deg},
                    {"max_edge_ratio", s.validator.max_edge_ratio},
                    {"min_area_ratio", s.validator.min_area_ratio},
                    {"max_area_ratio", s.validator.max_area_ratio}}}};
    j["augment"] = {{"n_lo", a.n_lo},
                    {"n_hi", a.n_hi},
                    {"oversample", a.oversample},
                    {"weight_lo", a.weight_lo},
                    {"weight_hi", a.weight_hi},
                    {"r_lo", a.r_lo},
                    {"r_hi", a.r_hi},
                    {"anchors_lo", a.anchors_lo},
                    {"anchors_hi", a.anchors_hi},
                    {"noise_kinds", kinds},
                    {"noise_scale", a.noise_scale}};
    return j.dump(2);
}

DatasetConfig load_dataset_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read config " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return dataset_config_from_json(ss.str());
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t record_seed(std::uint64_t seed, std::size_t index, int attempt) {
    return derive_seed(seed, index, static_cast<std::uint64_t>(attempt));
}

Sample synth_sample(const DatasetConfig& cfg, std::size_t index, std::span<const Polygon2D> pool) {
    Sample s;
    s.index = index;
    for (int a = 0; a < cfg.record_attempts; ++a) {
        s.seed = record_seed(cfg.synth.seed, index, a);
        s.attempts = a + 1;
        Rng rng(s.seed);
        try {
            const SynthTree st = synth_tree(cfg.synth, rng, pool);
            s.tree_retries += st.retries;
            s.shape = st.shape;
            s.program = quantize_program(tree_to_program(st.ground, st.tree));
            s.tokens = tokenize(s.program);
            if (!(detokenize(s.tokens) == s.program)) throw GenerationError("token round trip mismatch");
            s.mesh = compile(s.program);
            s.cloud = augment(s.mesh, cfg.augment, rng);
            s.cloud.meta.seed = s.seed;
            return s;
        } catch (const Error& e) {
            s.failures.push_back(failure_kind(e) + ": " + e.what());
        }
    }
    throw GenerationError("record " + std::to_string(index) + " failed after " + std::to_string(cfg.record_attempts) +
                          " attempts; last: " + s.failures.back());
}

std::string Manifest::to_json() const {
    ordered_json j;
    j["seed"] = seed;
    j["n"] = n;
    j["config_hash"] = config_hash;
    j["counts"] = {{"records", n}, {"points", points}, {"layers", layers}, {"templates", templates}, {"noise", noise}};
    j["failures"] = {{"attempts", failed_attempts}, {"tree_retries", tree_retries}, {"kinds", failure_kinds}};
    j["records_hash"] = records_hash;
    j["artifacts_hash"] = artifacts_hash;
    return j.dump(2) + "\n";
}

Manifest synth_dataset(const DatasetConfig& cfg, std::size_t n, const std::string& dir) {
    cfg.check();
    const fs::path root(dir);
    std::error_code ec;
    for (const char* sub : {"meshes", "points"}) {
        fs::create_directories(root / sub, ec);
        if (ec) throw IoError("cannot create " + (root / sub).string() + ": " + ec.message());
    }
    std::vector<Polygon2D> pool;
    if (!cfg.synth.footprint_file.empty()) pool = load_footprints(cfg.synth.footprint_file);

    std::vector<std::optional<Written>> out(n);
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = write_sample(synth_sample(cfg, k, pool), root);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);

    Manifest m;
    m.seed = cfg.synth.seed;
    m.n = n;
    m.config_hash = hex64(fnv1a(dataset_config_to_json(cfg)));
    std::string records, tokens;
    std::uint64_t artifacts = fnv1a("");
    for (const std::optional<Written>& w : out) {
        records += w->record_line;
        tokens += w->token_line;
        const std::string h = hex64(w->artifact_hash);
        artifacts = fnv1a(h, artifacts);
        m.points += w->points;
        m.layers += w->layers;
        ++m.templates[w->shape];
        ++m.noise[w->noise];
        m.tree_retries += static_cast<std::size_t>(w->tree_retries);
        m.failed_attempts += w->failure_kinds.size();
        for (const std::string& k : w->failure_kinds) ++m.failure_kinds[k];
    }
    m.records_hash = hex64(fnv1a(records));
    m.artifacts_hash = hex64(artifacts);
    write_file(root / "records.jsonl", records);
    write_file(root / "tokens.jsonl", tokens);
    write_file(root / "manifest.json", m.to_json());
    return m;
}

std::vector<DatasetRecord> read_records(const std::string& dir) {
    const fs::path path = fs::path(dir) / "records.jsonl";
    std::ifstream is(path);
    if (!is) throw IoError("cannot read " + path.string());
    std::vector<DatasetRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            DatasetRecord r;
            r.id = j.at("id").get<std::string>();
            r.program = j.at("program").get<std::string>();
            r.tokens = j.at("tokens").get<TokenSequence>();
            r.mesh = j.at("mesh").get<std::string>();
            r.points = j.at("points").get<std::string>();
            const json& meta = j.at("meta");
            r.n_points = meta.at("n_points").get<std::size_t>();
            r.noise = meta.at("noise").get<std::string>();
            r.noise_scale = meta.at("noise_scale").get<double>();
            r.incomplete_ratio = meta.at("incomplete_ratio").get<double>();
            r.anchors = meta.at("anchors").get<int>();
            r.seed = meta.at("seed").get<std::uint64_t>();
            r.shape = meta.at("template").get<std::string>();
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::string token_record_json(const TokenRecord& r) {
    ordered_json j;
    j["id"] = r.id;
    j["tokens"] = r.tokens;
    return j.dump();
}

std::vector<TokenRecord> read_token_records(std::istream& is) {
    std::vector<TokenRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            out.push_back({j.at("id").get<std::string>(), j.at("tokens").get<TokenSequence>()});
        } catch (const json::exception& e) {
            throw IoError("token record " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

} // namespace archprog
