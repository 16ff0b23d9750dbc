#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "archprog/compiler.hpp"
#include "archprog/dataset.hpp"
#include "archprog/error.hpp"
#include "archprog/mask_server.hpp"
#include "archprog/metrics.hpp"
#include "archprog/pointcloud.hpp"
#include "archprog/refine.hpp"
#include "archprog/tokens.hpp"

using namespace archprog;

namespace {

enum Exit : int { kOk = 0, kUsage = 2, kIo = 3, kInvalid = 4 };

/// Failure tied to a command-line or configuration problem (exit 2).
class UsageError : public Error {
public:
    using Error::Error;
};

std::string read_text(const std::string& path) {
    std::ostringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read " + path);
    ss << is.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream os(path, std::ios::binary);
    os << text;
    if (!os) throw IoError("cannot write " + path);
}

Mesh read_mesh(const std::string& path) {
    std::istringstream is(read_text(path));
    return read_obj(is);
}

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// synth ---------------------------------------------------------------------

struct SynthArgs {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string config;
    std::string out;
    int threads = 0;
};

int run_synth(const SynthArgs& a) {
    DatasetConfig cfg;
    if (!a.config.empty()) {
        try {
            cfg = load_dataset_config(a.config);
        } catch (const IoError& e) {
            throw UsageError(e.what());
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
    }
    if (a.seed_set) cfg.synth.seed = a.seed;
    if (a.threads > 0) omp_set_num_threads(a.threads);
    const Manifest m = synth_dataset(cfg, a.n, a.out);
    std::cout << m.to_json();
    return kOk;
}

// compile / fmt / validate ----------------------------------------------------

int run_compile(const std::string& in, const std::string& out, bool groups) {
    const Mesh m = compile(parse_program(read_text(in)));
    std::ostringstream os;
    write_obj(os, m, groups);
    write_text(out, os.str());
    return kOk;
}

int run_fmt(const std::string& in, const std::string& out, bool check, bool exact) {
    const std::string text = read_text(in);
    const std::string canon = print_program(parse_program(text), exact);
    if (check) {
        if (canon == text) return kOk;
        std::cerr << in << ": not in canonical form\n";
        return kInvalid;
    }
    write_text(out, canon);
    return kOk;
}

int validate_dataset(const std::string& dir) {
    namespace fs = std::filesystem;
    std::size_t bad = 0;
    const std::vector<DatasetRecord> recs = read_records(dir);
    for (const DatasetRecord& r : recs) {
        std::vector<std::string> problems;
        try {
            if (!(detokenize(r.tokens) == quantize_program(parse_program(r.program))))
                problems.push_back("tokens do not match the program");
        } catch (const Error& e) {
            problems.push_back(e.what());
        }
        try {
            const std::size_t n = load_ply((fs::path(dir) / r.points).string()).size();
            if (n != r.n_points) problems.push_back("point file has " + std::to_string(n) + " points");
        } catch (const Error& e) {
            problems.push_back(e.what());
        }
        try {
            if (load_obj((fs::path(dir) / r.mesh).string()).triangles.empty()) problems.push_back("empty mesh");
        } catch (const Error& e) {
            problems.push_back(e.what());
        }
        for (const std::string& p : problems) std::cerr << r.id << ": " << p << "\n";
        bad += !problems.empty();
    }
    nlohmann::ordered_json j;
    j["records"] = recs.size();
    j["invalid"] = bad;
    std::cout << j.dump() << "\n";
    return bad ? kInvalid : kOk;
}

int run_validate(const std::string& in, const std::string& dataset) {
    if (!dataset.empty()) return validate_dataset(dataset);
    const Program p = parse_program(read_text(in));
    std::vector<std::string> issues;
    for (const Diagnostic& d : validate_program(p)) issues.push_back(d.to_string());
    for (const LayerStatement& st : p.layers) {
        if (st.parent == kGround) continue;
        for (const std::string& r : validate_contour(st.contour, p.layer(st.parent).contour).reasons)
            issues.push_back("L" + std::to_string(st.label) + ": " + r);
    }
    nlohmann::ordered_json j;
    j["valid"] = issues.empty();
    j["issues"] = issues;
    std::cout << j.dump() << "\n";
    return issues.empty() ? kOk : kInvalid;
}

// tokens ------------------------------------------------------------------------

int run_tokenize(const std::string& in, const std::string& out, const std::string& id) {
    const TokenSequence t = tokenize(quantize_program(parse_program(read_text(in))));
    write_text(out, token_record_json({id, t}) + "\n");
    return kOk;
}

int run_detokenize(const std::string& in, const std::string& out) {
    std::istringstream is(read_text(in));
    std::string text;
    for (const TokenRecord& r : read_token_records(is)) text += print_program(detokenize(r.tokens));
    write_text(out, text);
    return kOk;
}

int run_fsm_serve(int lmax, int max_points) {
    GrammarLimits limits;
    limits.lmax = lmax;
    limits.max_points = max_points;
    serve_masks(std::cin, std::cout, Fsm(limits));
    return kOk;
}

// points / refine / eval -----------------------------------------------------------

struct SampleArgs {
    std::string in;
    std::string out = "-";
    std::uint64_t seed = 0;
    std::size_t count = 0;
    std::string config;
    bool normalized = false;
};

int run_sample(const SampleArgs& a) {
    const bool obj = a.in.size() > 4 && a.in.substr(a.in.size() - 4) == ".obj";
    const Mesh mesh = obj ? read_mesh(a.in) : compile(parse_program(read_text(a.in)));
    Rng rng(a.seed);
    PointCloud pc;
    if (a.count > 0) {
        pc = sample_surface(mesh, a.count, {}, rng);
    } else {
        AugmentSpec spec;
        if (!a.config.empty()) {
            try {
                spec = load_dataset_config(a.config).augment;
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
        }
        pc = augment(mesh, spec, rng);
    }
    pc.meta.seed = a.seed;
    if (a.normalized) pc = normalize(pc);

    if (a.out == "-") {
        write_xyz(std::cout, pc.points);
        return kOk;
    }
    save_points(a.out, pc.points);
    nlohmann::ordered_json j;
    j["points"] = pc.points.size();
    j["noise"] = noise_name(pc.meta.noise);
    j["noise_scale"] = pc.meta.noise_scale;
    j["incomplete_ratio"] = pc.meta.incomplete_ratio;
    j["anchors"] = pc.meta.anchors;
    j["seed"] = a.seed;
    j["centre"] = {pc.meta.transform.centre.x, pc.meta.transform.centre.y, pc.meta.transform.centre.z};
    j["scale"] = pc.meta.transform.scale;
    std::cout << j.dump() << "\n";
    return kOk;
}

int run_refine(const std::string& in, const std::string& out, double threshold, const std::string& report_path,
               bool canonical) {
    SnapReport report;
    const Program p = refine_program(parse_program(read_text(in)), threshold, &report);
    write_text(out, print_program(p, !canonical));
    if (!report_path.empty()) write_text(report_path, report.to_json() + "\n");
    return kOk;
}

struct EvalArgs {
    std::string pred, ref, pairs;
    std::string id = "0";
    std::size_t samples = 4096;
    std::uint64_t seed = kDefaultMetricSeed;
    int threads = 0;
};

struct EvalRow {
    std::string id;
    MeshDistance hd;
    MeshStats stats;
};

std::string eval_csv(const std::vector<EvalRow>& rows) {
    std::string s = "id,hd,n_vertices,n_faces,n_planes,samples,seed\n";
    for (const EvalRow& r : rows)
        s += r.id + "," + csv_double(r.hd.value) + "," + std::to_string(r.stats.n_vertices) + "," +
             std::to_string(r.stats.n_faces) + "," + std::to_string(r.stats.n_planes) + "," +
             std::to_string(r.hd.samples) + "," + std::to_string(r.hd.seed) + "\n";
    return s;
}

int run_eval(const EvalArgs& a) {
    struct Pair {
        std::string id, pred, ref;
    };
    std::vector<Pair> pairs;
    if (!a.pairs.empty()) {
        std::istringstream is(read_text(a.pairs));
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::vector<std::string> f;
            std::stringstream ls(line);
            for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
            if (f.size() != 3) throw UsageError("pairs file lines must be id,pred.obj,ref.obj: " + line);
            pairs.push_back({f[0], f[1], f[2]});
        }
    } else {
        if (a.pred.empty() || a.ref.empty()) throw UsageError("eval needs --pred and --ref, or --pairs");
        pairs.push_back({a.id, a.pred, a.ref});
    }
    if (a.threads > 0) omp_set_num_threads(a.threads);

    std::vector<EvalRow> rows(pairs.size());
    std::vector<std::exception_ptr> errors(pairs.size());
    const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            const Mesh pred = read_mesh(pairs[k].pred);
            const Mesh ref = read_mesh(pairs[k].ref);
            rows[k] = {pairs[k].id, mesh_hausdorff(pred, ref, a.samples, a.seed), mesh_stats(pred)};
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
    std::cout << eval_csv(rows);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Architectural program toolchain"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "archprog 1.0");

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth", "Synthesize a dataset of programs, meshes, points and tokens");
    c_synth->add_option("--n", synth.n, "Number of records")->required();
    auto* o_seed = c_synth->add_option("--seed", synth.seed, "Base seed (overrides the config)");
    c_synth->add_option("--config", synth.config, "Dataset config JSON");
    c_synth->add_option("--out", synth.out, "Output directory")->required();
    c_synth->add_option("--threads", synth.threads, "OpenMP threads (0: runtime default)");

    std::string in = "-", out = "-", id = "0", report, dataset;
    bool groups = true, check = false, exact = false, canonical = false;
    double threshold = kDefaultSnapThreshold;

    auto* c_compile = app.add_subcommand("compile", "Compile a program to an OBJ mesh");
    c_compile->add_option("--in", in, "Program text ('-' for stdin)");
    c_compile->add_option("--out", out, "OBJ path ('-' for stdout)");
    c_compile->add_flag("!--no-groups", groups, "Omit per-layer OBJ groups");

    auto* c_fmt = app.add_subcommand("fmt", "Print a program in canonical form");
    c_fmt->add_option("--in", in, "Program text ('-' for stdin)");
    c_fmt->add_option("--out", out, "Output path ('-' for stdout)");
    c_fmt->add_flag("--check", check, "Exit 4 unless the input is already canonical");
    c_fmt->add_flag("--exact", exact, "Keep digits that two-decimal output would drop");

    auto* c_validate = app.add_subcommand("validate", "Check a program, or every record of a dataset");
    c_validate->add_option("--in", in, "Program text ('-' for stdin)");
    c_validate->add_option("--dataset", dataset, "Dataset directory");

    auto* c_tok = app.add_subcommand("tokenize", "Program text to a token JSONL record");
    c_tok->add_option("--in", in, "Program text ('-' for stdin)");
    c_tok->add_option("--out", out, "JSONL path ('-' for stdout)");
    c_tok->add_option("--id", id, "Record id");

    auto* c_detok = app.add_subcommand("detokenize", "Token JSONL records to program text");
    c_detok->add_option("--in", in, "JSONL path ('-' for stdin)");
    c_detok->add_option("--out", out, "Program path ('-' for stdout)");

    int lmax = 16, max_points = 32;
    auto* c_serve = app.add_subcommand("fsm-serve", "Answer next-token mask requests on stdin/stdout");
    c_serve->add_option("--lmax", lmax, "Largest layer label")->check(CLI::Range(1, 1000));
    c_serve->add_option("--max-points", max_points, "Most vertices per contour")->check(CLI::Range(3, 1000));

    SampleArgs sample;
    auto* c_sample = app.add_subcommand("sample", "Sample a point cloud from a mesh or program");
    c_sample->add_option("--in", sample.in, "OBJ mesh or program text")->required();
    c_sample->add_option("--out", sample.out, "PLY or XYZ path ('-': XYZ on stdout)");
    c_sample->add_option("--seed", sample.seed, "Seed");
    c_sample->add_option("--count", sample.count, "Plain area-uniform sampling of this many points");
    c_sample->add_option("--config", sample.config, "Dataset config JSON for the augmentation settings");
    c_sample->add_flag("--normalize", sample.normalized, "Centre and scale to the unit box");

    auto* c_refine = app.add_subcommand("refine", "Snap child contours onto their parents");
    c_refine->add_option("--in", in, "Program text ('-' for stdin)");
    c_refine->add_option("--out", out, "Program path ('-' for stdout)");
    c_refine->add_option("--threshold", threshold, "Snap distance")->check(CLI::NonNegativeNumber);
    c_refine->add_option("--report", report, "Snap report JSON path");
    c_refine->add_flag("--canonical", canonical, "Round the output to two decimals");

    EvalArgs ev;
    auto* c_eval = app.add_subcommand("eval", "Hausdorff distance and mesh statistics as CSV");
    c_eval->add_option("--pred", ev.pred, "Predicted OBJ");
    c_eval->add_option("--ref", ev.ref, "Reference OBJ");
    c_eval->add_option("--id", ev.id, "Row id for a single pair");
    c_eval->add_option("--pairs", ev.pairs, "File of id,pred.obj,ref.obj lines");
    c_eval->add_option("--samples", ev.samples, "Surface samples per mesh")->check(CLI::Range(kMinMeshSamples, std::size_t{1} << 26));
    c_eval->add_option("--seed", ev.seed, "Sampling seed");
    c_eval->add_option("--threads", ev.threads, "OpenMP threads (0: runtime default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    synth.seed_set = o_seed->count() > 0;
    try {
        if (c_synth->parsed()) return run_synth(synth);
        if (c_compile->parsed()) return run_compile(in, out, groups);
        if (c_fmt->parsed()) return run_fmt(in, out, check, exact);
        if (c_validate->parsed()) return run_validate(in, dataset);
        if (c_tok->parsed()) return run_tokenize(in, out, id);
        if (c_detok->parsed()) return run_detokenize(in, out);
        if (c_serve->parsed()) return run_fsm_serve(lmax, max_points);
        if (c_sample->parsed()) return run_sample(sample);
        if (c_refine->parsed()) return run_refine(in, out, threshold, report, canonical);
        if (c_eval->parsed()) return run_eval(ev);
    } catch (const UsageError& e) {
        std::cerr << "archprog: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigError& e) {
        std::cerr << "archprog: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "archprog: " << e.what() << "\n";
        return kIo;
    } catch (const Error& e) {
        std::cerr << "archprog: " << e.what() << "\n";
        return kInvalid;
    }
    return kUsage;
}
