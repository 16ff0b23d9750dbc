#include "doctest.h"

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "archprog/dataset.hpp"
#include "archprog/error.hpp"
#include "json.hpp"

using namespace archprog;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("archprog_test_dataset_" + name);
    fs::remove_all(p);
    return p;
}

double point_triangle_distance(Vec3 p, Vec3 a, Vec3 b, Vec3 c) {
    // Plane distance when the projection is inside, otherwise the nearest edge.
    const Vec3 n = cross(b - a, c - a);
    const double len = norm(n);
    const Vec3 u = n * (1.0 / len);
    const double h = dot(p - a, u);
    const Vec3 q = p - u * h;
    const double total = len;
    const double wa = norm(cross(b - q, c - q)) / total;
    const double wb = norm(cross(c - q, a - q)) / total;
    const double wc = norm(cross(a - q, b - q)) / total;
    if (std::abs(wa + wb + wc - 1.0) < 1e-9) return std::abs(h);
    auto seg = [](Vec3 x, Vec3 s, Vec3 t) {
        const Vec3 d = t - s;
        const double k = std::clamp(dot(x - s, d) / dot(d, d), 0.0, 1.0);
        return norm(x - (s + d * k));
    };
    return std::min({seg(p, a, b), seg(p, b, c), seg(p, c, a)});
}

double mesh_distance(Vec3 p, const Mesh& m) {
    double d = INFINITY;
    for (std::size_t f = 0; f < m.triangles.size(); ++f)
        d = std::min(d, point_triangle_distance(p, m.corner(f, 0), m.corner(f, 1), m.corner(f, 2)));
    return d;
}

} // namespace

TEST_CASE("config JSON round trip and errors") {
    const DatasetConfig d;
    const std::string text = dataset_config_to_json(d);
    CHECK(dataset_config_to_json(dataset_config_from_json(text)) == text);
    CHECK(dataset_config_to_json(dataset_config_from_json("{}")) == text);

    const DatasetConfig c = dataset_config_from_json(
        R"({"seed": 7, "synth": {"template_weights": {"free": 2}, "validator": {"max_edge_ratio": 8}},
            "augment": {"n_lo": 300, "noise_kinds": ["none"]}})");
    CHECK(c.synth.seed == 7);
    CHECK(c.synth.template_weights[static_cast<std::size_t>(TreeTemplate::Free)] == 2.0);
    CHECK(c.synth.validator.max_edge_ratio == 8.0);
    CHECK(c.augment.n_lo == 300);
    CHECK(c.augment.noise_kinds == std::vector<NoiseKind>{NoiseKind::None});
    CHECK(fnv1a(dataset_config_to_json(c)) != fnv1a(text));

    CHECK_THROWS_AS(dataset_config_from_json(R"({"sead": 1})"), ConfigError);
    CHECK_THROWS_AS(dataset_config_from_json(R"({"synth": {"height_lo": "x"}})"), ConfigError);
    CHECK_THROWS_AS(dataset_config_from_json(R"({"synth": {"template_weights": {"tower": 1}}})"), ConfigError);
    CHECK_THROWS_AS(dataset_config_from_json(R"({"augment": {"n_lo": 0}})"), ConfigError);
    CHECK_THROWS_AS(dataset_config_from_json(R"({"augment": {"noise_kinds": ["pink"]}})"), ConfigError);
    CHECK_THROWS_AS(dataset_config_from_json(R"({"synth": {"max_vertices": 40}})"), ConfigError);
    CHECK_THROWS_AS(dataset_config_from_json("[1"), ConfigError);
    CHECK_THROWS_AS(load_dataset_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("fnv1a reference values") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
    CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("samples are deterministic and self-consistent") {
    DatasetConfig cfg;
    cfg.synth.seed = 4;
    for (std::size_t i = 0; i < 20; ++i) {
        const Sample a = synth_sample(cfg, i);
        const Sample b = synth_sample(cfg, i);
        CHECK(a.program == b.program);
        CHECK(a.cloud.points == b.cloud.points);
        CHECK(a.seed == record_seed(4, i, a.attempts - 1));
        CHECK(detokenize(a.tokens) == a.program);
        CHECK(quantize_program(a.program) == a.program);
        CHECK(a.cloud.points.size() >= 200);
        CHECK(a.cloud.points.size() <= 2000);
    }
    CHECK(record_seed(4, 0, 0) != record_seed(4, 1, 0));
    CHECK(record_seed(4, 0, 0) != record_seed(4, 0, 1));
}

TEST_CASE("noise-free pipeline leaves points on the surface") {
    DatasetConfig cfg;
    cfg.synth.seed = 12;
    cfg.augment.noise_scale = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        const Sample s = synth_sample(cfg, i);
        double worst = 0.0;
        for (const Vec3& p : s.cloud.points) worst = std::max(worst, mesh_distance(p, s.mesh));
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("dataset directory layout and determinism") {
    DatasetConfig cfg;
    cfg.synth.seed = 1;
    const fs::path a = scratch("a"), b = scratch("b");
    omp_set_num_threads(1);
    const Manifest ma = synth_dataset(cfg, 10, a.string());
    omp_set_num_threads(3);
    const Manifest mb = synth_dataset(cfg, 10, b.string());
    omp_set_num_threads(1);
    CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
    CHECK(slurp(a / "records.jsonl") == slurp(b / "records.jsonl"));
    CHECK(slurp(a / "points/000009.ply") == slurp(b / "points/000009.ply"));
    CHECK(ma.to_json() == mb.to_json());

    const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
    CHECK(manifest["seed"] == 1);
    CHECK(manifest["n"] == 10);
    CHECK(manifest["config_hash"] == hex64(fnv1a(dataset_config_to_json(cfg))));
    CHECK(manifest["records_hash"] == hex64(fnv1a(slurp(a / "records.jsonl"))));

    const std::vector<DatasetRecord> recs = read_records(a.string());
    REQUIRE(recs.size() == 10);
    std::ifstream ts(a / "tokens.jsonl");
    const std::vector<TokenRecord> toks = read_token_records(ts);
    REQUIRE(toks.size() == 10);
    std::size_t total = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const DatasetRecord& r = recs[i];
        CHECK(r.id == toks[i].id);
        CHECK(r.tokens == toks[i].tokens);
        CHECK(detokenize(r.tokens) == quantize_program(parse_program(r.program)));
        const std::vector<Vec3> pts = load_ply((a / r.points).string());
        CHECK(pts.size() == r.n_points);
        CHECK(r.n_points >= 200);
        CHECK(r.n_points <= 2000);
        total += pts.size();
        const Mesh m = load_obj((a / r.mesh).string());
        CHECK(!m.triangles.empty());
        bool known_seed = false;
        for (int att = 0; att < cfg.record_attempts; ++att) known_seed |= r.seed == record_seed(1, i, att);
        CHECK(known_seed);
    }
    CHECK(manifest["counts"]["points"] == total);

    cfg.synth.seed = 2;
    const Manifest mc = synth_dataset(cfg, 10, scratch("c").string());
    CHECK(mc.config_hash != ma.config_hash);
    CHECK(mc.records_hash != ma.records_hash);
    fs::remove_all(a);
    fs::remove_all(b);
    fs::remove_all(scratch("c"));
}

TEST_CASE("empty dataset and unwritable output") {
    const fs::path e = scratch("empty");
    const Manifest m = synth_dataset(DatasetConfig{}, 0, e.string());
    CHECK(m.n == 0);
    CHECK(slurp(e / "records.jsonl").empty());
    CHECK(read_records(e.string()).empty());
    fs::remove_all(e);
    CHECK_THROWS_AS(synth_dataset(DatasetConfig{}, 1, "/proc/archprog_no_such_dir"), IoError);
}

TEST_CASE("token records") {
    const TokenRecord r{"x1", {107, 100, 101, 50, 102, 106}};
    CHECK(token_record_json(r) == R"({"id":"x1","tokens":[107,100,101,50,102,106]})");
    std::istringstream is(token_record_json(r) + "\n\n" + token_record_json({"x2", {}}) + "\n");
    const auto back = read_token_records(is);
    REQUIRE(back.size() == 2);
    CHECK(back[0].tokens == r.tokens);
    CHECK(back[1].id == "x2");
    std::istringstream bad("{\"id\": 3}\n");
    CHECK_THROWS_AS(read_token_records(bad), IoError);
}
