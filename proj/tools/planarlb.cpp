// planarlb: build grid embeddings, check closed forms, run reductions and
// benchmark engines.
//
// Exit codes: 0 ok, 1 verification mismatch, 2 usage or configuration error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "planarlb/planarlb.hpp"

namespace fs = std::filesystem;
using namespace planarlb;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t seed = 1;
    std::string json_path;
    bool trace = false;
    bool verify = false;
    bool no_timing = false;
};

struct Dims {
    int n = 4;
    int na = 0;
    int nb = 0;
    double alpha = 0;
    double beta = 0;
    Weight x = 8;

    void resolve() {
        if (n < 1) throw UsageError("--n must be positive");
        auto power = [&](double e) { return std::max(1, static_cast<int>(std::floor(std::pow(n, e) + 1e-9))); };
        if (na == 0) na = alpha > 0 ? power(alpha) : n;
        if (nb == 0) nb = beta > 0 ? power(beta) : n;
        if (na < 1 || nb < 1) throw UsageError("--na/--nb must be positive");
        if (x < 1) throw UsageError("--x must be at least 1");
    }
};

fs::path output_path(const std::string& p) {
    fs::path path(p);
    if (path.is_relative())
        if (const char* dir = std::getenv("PLANARLB_REPORT_DIR"); dir && *dir) path = fs::path(dir) / path;
    return path;
}

void write_text(const std::string& p, const std::string& text) {
    if (p.empty() || p == "-") {
        std::cout << text;
        return;
    }
    const fs::path path = output_path(p);
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << text;
    if (!out) throw UsageError("cannot write " + path.string());
}

void emit_report(const Common& c, const RunReport& r) {
    if (!c.json_path.empty()) write_text(c.json_path, r.dump(!c.no_timing));
}

Matrix load_matrix_file(const std::string& p) {
    std::ifstream in(p);
    if (!in) throw UsageError("cannot read matrix file " + p);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '[' || text[first] == '{'))
        return matrix_from_json(nlohmann::json::parse(text));
    std::istringstream is(text);
    return matrix_from_text(is);
}

Matrix make_matrix(const std::string& kind, int rows, int cols, Weight hi, std::mt19937_64& rng,
                   const std::string& file) {
    if (kind == "ones") return Matrix(rows, cols, 1);
    if (kind == "zeros") return Matrix(rows, cols, 0);
    if (kind == "random") return hi <= 1 ? random_boolean_matrix(rows, cols, rng) : random_matrix(rows, cols, 0, hi, rng);
    if (kind == "file") {
        if (file.empty()) throw UsageError("--matrix file needs --matrix-file");
        return load_matrix_file(file);
    }
    throw UsageError("unknown matrix kind '" + kind + "'");
}

ojson dims_json(const Dims& d) { return {{"n", d.n}, {"n_alpha", d.na}, {"n_beta", d.nb}, {"X", d.x}}; }

// ---------------------------------------------------------------------------
// embed

struct EmbedArgs {
    int rows = 3;
    int cols = 3;
    std::string matrix = "ones";
    std::string matrix_file;
    std::string kind = "boolean";
    Weight x = 1;
    std::string format = "json";
    std::string out;
};

int cmd_embed(const EmbedArgs& e, const Common& c) {
    std::mt19937_64 rng(c.seed);
    Graph g;
    if (e.kind == "boolean") {
        const Matrix m = make_matrix(e.matrix, e.rows, e.cols, 1, rng, e.matrix_file);
        g = embed_boolean(m).graph;
    } else if (e.kind == "weighted") {
        const Matrix m = make_matrix(e.matrix, e.rows, e.cols, e.x, rng, e.matrix_file);
        g = embed_weighted(m, e.x).graph;
    } else if (e.kind == "mirrored") {
        g = embed_mirrored(e.rows, e.cols, e.x * e.x).graph;
    } else {
        throw UsageError("unknown embedding kind '" + e.kind + "'");
    }
    if (e.format == "json")
        write_text(e.out, graph_to_json_string(g) + "\n");
    else if (e.format == "dot")
        write_text(e.out, graph_to_dot(g));
    else
        throw UsageError("unknown format '" + e.format + "'");
    std::cerr << "embed: " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// verify-formulas

struct FormulaArgs {
    int rows = 5;
    int cols = 5;
    int trials = 20;
    Weight x = 5;
};

int cmd_verify_formulas(const FormulaArgs& f, const Common& c) {
    if (f.rows < 1 || f.cols < 1 || f.trials < 0 || f.x < 1) throw UsageError("invalid verify-formulas arguments");
    std::mt19937_64 rng(c.seed);
    std::uint64_t checks = 0, mismatches = 0;
    ojson bad = ojson::array();
    auto record = [&](const char* what, int j, int k, Weight got, Weight want) {
        ++checks;
        if (got == want) return;
        ++mismatches;
        if (bad.size() < 20) bad.push_back({{"form", what}, {"j", j}, {"k", k}, {"dijkstra", got}, {"closed_form", want}});
    };
    std::vector<Matrix> boolean{Matrix(f.rows, f.cols, 1), Matrix(f.rows, f.cols, 0)};
    for (int t = 0; t < f.trials; ++t) boolean.push_back(random_boolean_matrix(f.rows, f.cols, rng));
    for (const Matrix& m : boolean) {
        const GridEmbedding e = embed_boolean(m);
        for (int j = 1; j <= f.cols; ++j) {
            const DistanceMap dm = dijkstra(e.graph, e.handles.a(j));
            for (int k = 1; k <= f.rows; ++k)
                record("boolean", j, k, dm[e.handles.b(k)],
                       closed_form_distance({f.rows, f.cols, j, k, m.at1(k, j), std::nullopt, false}));
        }
        for (int i = 1; i <= f.rows; ++i)
            for (int j = 1; j <= f.cols; ++j) {
                const DistanceMap dm = dijkstra(e.graph, e.handles.u(i, j));
                for (int k = i + 1; k <= f.rows; ++k)
                    record("interior", j, k, dm[e.handles.b(k)],
                           closed_form_interior_distance(f.rows, f.cols, i, j, k, m.at1(k, j)));
            }
    }
    for (int t = 0; t < std::max(1, f.trials); ++t) {
        const Matrix m = random_matrix(f.rows, f.cols, 0, f.x, rng);
        const GridEmbedding e = embed_weighted(m, f.x);
        for (int j = 1; j <= f.cols; ++j) {
            const DistanceMap dm = dijkstra(e.graph, e.handles.a(j));
            for (int k = 1; k <= f.rows; ++k)
                record("weighted", j, k, dm[e.handles.b(k)],
                       closed_form_distance({f.rows, f.cols, j, k, m.at1(k, j), f.x, false}));
        }
    }
    const GridEmbedding mir = embed_mirrored(f.rows, f.cols, f.x * f.x);
    for (int j = 1; j <= f.cols; ++j) {
        const DistanceMap dm = dijkstra(mir.graph, mir.handles.a(j));
        for (int k = 1; k <= f.rows; ++k)
            record("mirrored", j, k, dm[mir.handles.b(k)], closed_form_distance({f.rows, f.cols, j, k, 0, f.x, true}));
    }

    RunReport r("verify-formulas", "closed-forms");
    r.set_config({{"rows", f.rows}, {"cols", f.cols}, {"trials", f.trials}, {"X", f.x}, {"seed", c.seed}});
    r.body()["checks"] = checks;
    r.body()["mismatches"] = mismatches;
    r.body()["examples"] = bad;
    r.set_oracle_match(mismatches == 0);
    emit_report(c, r);
    std::cout << "verify-formulas: " << checks << " checks, " << mismatches << " mismatches\n";
    return mismatches == 0 ? kOk : kMismatch;
}

// ---------------------------------------------------------------------------
// reduce

struct ReduceArgs {
    std::string kind;
    Dims dims;
    std::string engine = "naive";
    std::string mode = "full";
    std::string objective = "min";
    std::optional<Weight> y;
    Weight rho = 2;
    Weight shift = 0;
    int pairs = 0;
};

UpdateMode parse_mode(const std::string& m) {
    if (m == "full") return UpdateMode::full;
    if (m == "weight-only") return UpdateMode::weight_only;
    throw UsageError("mode '" + m + "' is not available here");
}

int cmd_reduce(ReduceArgs ra, const Common& c) {
    ra.dims.resolve();
    const Dims& d = ra.dims;
    std::mt19937_64 rng(c.seed);
    std::unique_ptr<DynamicDistanceEngine> engine;
    try {
        engine = make_engine(ra.engine);
    } catch (const InvalidArgument& ex) {
        throw UsageError(ex.what());
    }
    ojson config = {{"kind", ra.kind}, {"engine", ra.engine}, {"mode", ra.mode}, {"seed", c.seed}};
    config.update(dims_json(d));
    if (ra.shift) config["shift"] = ra.shift;
    RunReport report("reduce", ra.kind);
    bool match = true;

    if (ra.kind == "oumv") {
        if (ra.mode != "full") throw UsageError("the oumv reduction supports --mode full only");
        const Matrix m = random_boolean_matrix(d.nb, d.na, rng);
        const int count = ra.pairs > 0 ? ra.pairs : d.n;
        std::vector<BoolVectorPair> pairs(count);
        std::bernoulli_distribution coin(0.5);
        for (auto& p : pairs) {
            for (int k = 0; k < d.nb; ++k) p.u.push_back(coin(rng) ? 1 : 0);
            for (int j = 0; j < d.na; ++j) p.v.push_back(coin(rng) ? 1 : 0);
        }
        config["pairs"] = count;
        const UnitInstance inst = build_unit_instance(m);
        OuMvOptions opts;
        opts.record_trace = c.trace;
        const OuMvRun run = run_oumv(inst, *engine, pairs, opts);
        fill_report(report, run, c.trace);
        report.set_inputs_digest(inputs_digest({&m}));
        if (c.verify) {
            std::string want;
            for (const auto& p : pairs) want.push_back(oumv_answer(m, p.u, p.v) ? '1' : '0');
            match = want == run.bitstring();
            report.body()["expected"] = {{"bits", want}};
            report.body()["planarity_check"] = check_unit_planarity(inst).passed();
            match = match && report.body()["planarity_check"].get<bool>();
        }
        report.set_config(config);
        report.set_oracle_match(c.verify ? std::optional<bool>(match) : std::nullopt);
        emit_report(c, report);
        std::cout << "oumv bits " << run.bitstring() << (c.verify ? (match ? " (oracle match)" : " (MISMATCH)") : "")
                  << "\n";
        return match ? kOk : kMismatch;
    }

    const Matrix a = random_matrix(d.n, d.nb, 0, d.x, rng);
    const Matrix b = random_matrix(d.nb, d.na, 0, d.x, rng);
    report.set_inputs_digest(inputs_digest({&a, &b}));
    const Matrix want = c.verify ? min_plus_product(a, b) : Matrix();
    Matrix got;

    if (ra.kind == "apsp") {
        ApspOptions opts;
        opts.base_shift = ra.shift;
        opts.record_trace = c.trace || c.verify;
        ApspRun run;
        if (ra.mode == "incremental-rollback") {
            JournalingEngine journal(*engine);
            run = run_incremental_worstcase(a, b, d.x, journal, opts);
            if (c.verify) match = run.ledger.decrements == 0 && run.final_digest == run.initial_digest;
        } else {
            opts.mode = parse_mode(ra.mode);
            run = run_apsp_reduction(a, b, d.x, *engine, opts);
            if (c.verify)
                match = run.ledger.reweights == run.schedule.total_reweights() &&
                        run.ledger.queries == run.schedule.total_queries();
        }
        fill_report(report, run, c.trace);
        got = run.product;
    } else if (ra.kind == "matching") {
        if (ra.mode != "full") throw UsageError("the matching reduction supports --mode full only");
        MatchingObjective obj;
        if (ra.objective == "min")
            obj = MatchingObjective::min_perfect;
        else if (ra.objective == "max")
            obj = MatchingObjective::max_weight;
        else
            throw UsageError("--objective must be min or max");
        config["objective"] = ra.objective;
        MatchingOptions opts;
        opts.y = ra.y;
        opts.base_shift = ra.shift;
        opts.record_trace = c.trace || c.verify;
        const MatchingRun run = run_matching_reduction(a, b, d.x, obj, opts);
        fill_report(report, run, c.trace);
        got = run.product;
        if (c.verify) {
            // per-query cross-check against the shortest-path reduction
            NaiveDijkstraEngine ref;
            ApspOptions ao;
            ao.base_shift = ra.shift;
            ao.record_trace = true;
            const ApspRun apsp = run_apsp_reduction(a, b, d.x, ref, ao);
            bool same = apsp.trace.size() == run.trace.size();
            for (std::size_t q = 0; same && q < run.trace.size(); ++q)
                same = apsp.trace[q].distance == run.trace[q].distance;
            report.body()["distance_cross_check"] = same;
            match = same;
        }
    } else if (ra.kind == "st" || ra.kind == "girth" || ra.kind == "diameter") {
        const Variant v = variant_from_string(ra.kind);
        VariantOptions opts;
        opts.mode = parse_mode(ra.mode);
        opts.rho = ra.rho;
        opts.y = ra.y;
        opts.base_shift = ra.shift;
        opts.record_trace = c.trace;
        config["rho"] = ra.rho;
        const VariantRun run = run_variant_reduction(a, b, d.x, v, *engine, opts);
        fill_report(report, run, c.trace);
        got = run.product;
        if (c.verify) match = run.diameter_unique && run.parked_weights_ok;
    } else {
        throw UsageError("unknown reduction '" + ra.kind + "'");
    }

    if (c.verify) {
        match = match && got == want;
        if (!(got == want)) report.body()["expected"] = {{"product", matrix_rows_json(want)}};
    }
    report.set_config(config);
    report.set_oracle_match(c.verify ? std::optional<bool>(match) : std::nullopt);
    emit_report(c, report);
    std::cout << ra.kind << ": " << got.rows() << "x" << got.cols() << " product"
              << (c.verify ? (match ? " (oracle match)" : " (MISMATCH)") : "") << "\n";
    return match ? kOk : kMismatch;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
    std::vector<std::string> engines{"naive"};
    std::vector<int> sizes{8, 16, 32};
    Weight x = 8;
    std::string mode = "full";
    std::string csv;
};

int cmd_bench(const BenchArgs& ba, const Common& c) {
    std::ostringstream csv;
    csv << "engine,n,n_alpha,n_beta,X,updates,queries,update_ns_total,query_ns_total\n";
    bool match = true;
    for (int n : ba.sizes) {
        if (n < 1) throw UsageError("bench sizes must be positive");
        std::mt19937_64 rng(c.seed + static_cast<std::uint64_t>(n));
        const Matrix a = random_matrix(n, n, 0, ba.x, rng);
        const Matrix b = random_matrix(n, n, 0, ba.x, rng);
        const Matrix want = c.verify ? min_plus_product(a, b) : Matrix();
        for (const std::string& name : ba.engines) {
            std::unique_ptr<DynamicDistanceEngine> engine;
            try {
                engine = make_engine(name);
            } catch (const InvalidArgument& ex) {
                throw UsageError(ex.what());
            }
            ApspRun run;
            if (ba.mode == "incremental-rollback") {
                JournalingEngine journal(*engine);
                run = run_incremental_worstcase(a, b, ba.x, journal);
            } else {
                ApspOptions opts;
                opts.mode = parse_mode(ba.mode);
                run = run_apsp_reduction(a, b, ba.x, *engine, opts);
            }
            if (c.verify && !(run.product == want)) match = false;
            csv << name << ',' << n << ',' << n << ',' << n << ',' << ba.x << ',' << run.ledger.updates() << ','
                << run.ledger.queries << ',' << run.ledger.update_ns() << ',' << run.ledger.query_ns << '\n';
            const EngineStats st = engine->stats();
            std::cerr << "bench " << name << " n=" << n << ": nodes=" << run.node_count << " sssp_runs=" << st.sssp_runs
                      << " update_work=" << st.update_work << "\n";
        }
    }
    write_text(ba.csv, csv.str());
    if (c.verify) std::cerr << (match ? "bench: all products match the oracle\n" : "bench: MISMATCH\n");
    return match ? kOk : kMismatch;
}

// ---------------------------------------------------------------------------
// export

struct ExportArgs {
    std::string what = "double-grid";
    Dims dims;
    std::string format = "json";
    std::string out;
};

int cmd_export(ExportArgs ea, const Common& c) {
    ea.dims.resolve();
    const Dims& d = ea.dims;
    std::mt19937_64 rng(c.seed);
    Graph g;
    if (ea.what == "unit") {
        g = build_unit_instance(random_boolean_matrix(d.nb, d.na, rng)).connected_graph();
    } else {
        const Matrix b = random_matrix(d.nb, d.na, 0, d.x, rng);
        if (ea.what == "double-grid")
            g = assemble_double_grid(b, d.x).graph;
        else if (ea.what == "split")
            g = build_split_instance(b, d.x).graph;
        else if (ea.what == "girth")
            g = build_variant_instance(b, d.x, Variant::girth).graph;
        else
            throw UsageError("unknown export target '" + ea.what + "'");
    }
    if (ea.format == "json")
        write_text(ea.out, graph_to_json_string(g) + "\n");
    else if (ea.format == "dot")
        write_text(ea.out, graph_to_dot(g));
    else
        throw UsageError("unknown format '" + ea.format + "'");
    std::cerr << "export " << ea.what << ": " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
    return kOk;
}

void add_common(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed, "RNG seed");
    app->add_option("--json", c.json_path, "write a JSON run report");
    app->add_flag("--trace", c.trace, "include per-query traces in the report");
    app->add_flag("--verify", c.verify, "cross-check against the brute-force oracles");
    app->add_flag("--no-timing", c.no_timing, "omit wall-clock timings from the report");
}

void add_dims(CLI::App* app, Dims& d) {
    app->add_option("--n", d.n, "rows of A / number of phases");
    app->add_option("--na", d.na, "columns of B (n_alpha)");
    app->add_option("--nb", d.nb, "inner dimension (n_beta)");
    app->add_option("--alpha", d.alpha, "n_alpha = floor(n^alpha) when --na is absent");
    app->add_option("--beta", d.beta, "n_beta = floor(n^beta) when --nb is absent");
    app->add_option("--x", d.x, "entry bound X");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planar grid reductions for dynamic shortest paths and matching"};
    app.require_subcommand(1);
    Common common;

    EmbedArgs ea;
    auto* embed = app.add_subcommand("embed", "emit a grid embedding as JSON or DOT");
    add_common(embed, common);
    embed->add_option("--rows", ea.rows);
    embed->add_option("--cols", ea.cols);
    embed->add_option("--matrix", ea.matrix, "ones | zeros | random | file");
    embed->add_option("--matrix-file", ea.matrix_file, "JSON or whitespace matrix for --matrix file");
    embed->add_option("--kind", ea.kind, "boolean | weighted | mirrored");
    embed->add_option("--x", ea.x, "entry bound for weighted / scale root for mirrored");
    embed->add_option("--format", ea.format, "json | dot");
    embed->add_option("--out", ea.out, "output file (default stdout)");

    FormulaArgs fa;
    auto* formulas = app.add_subcommand("verify-formulas", "compare Dijkstra distances to the closed forms");
    add_common(formulas, common);
    formulas->add_option("--rows", fa.rows);
    formulas->add_option("--cols", fa.cols);
    formulas->add_option("--trials", fa.trials, "random matrices per form");
    formulas->add_option("--x", fa.x, "entry bound for the weighted form");

    ReduceArgs ra;
    auto* reduce = app.add_subcommand("reduce", "run a reduction on random inputs");
    add_common(reduce, common);
    reduce->add_option("kind", ra.kind, "apsp | matching | oumv | st | girth | diameter")
        ->required()
        ->check(CLI::IsMember({"apsp", "matching", "oumv", "st", "girth", "diameter"}));
    add_dims(reduce, ra.dims);
    reduce->add_option("--engine", ra.engine, "naive | cached");
    reduce->add_option("--mode", ra.mode, "full | weight-only | incremental-rollback");
    reduce->add_option("--objective", ra.objective, "matching: min | max");
    reduce->add_option("--y", ra.y, "heavy weight (matching max mode, variants)");
    reduce->add_option("--rho", ra.rho, "parking factor for weight-only variants");
    reduce->add_option("--shift", ra.shift, "uniform shift on crossing edges");
    reduce->add_option("--pairs", ra.pairs, "oumv: number of vector pairs (default n)");

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "time the APSP reduction per engine and size");
    add_common(bench, common);
    bench->add_option("--engines", ba.engines, "engines to run")->delimiter(',');
    bench->add_option("--sizes", ba.sizes, "square sizes n = n_alpha = n_beta")->delimiter(',');
    bench->add_option("--x", ba.x);
    bench->add_option("--mode", ba.mode, "full | weight-only | incremental-rollback");
    bench->add_option("--csv", ba.csv, "CSV output file (default stdout)");

    ExportArgs xa;
    auto* exp = app.add_subcommand("export", "export a reduction instance graph");
    add_common(exp, common);
    exp->add_option("what", xa.what, "double-grid | split | unit | girth");
    add_dims(exp, xa.dims);
    exp->add_option("--format", xa.format, "json | dot");
    exp->add_option("--out", xa.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*embed) return cmd_embed(ea, common);
        if (*formulas) return cmd_verify_formulas(fa, common);
        if (*reduce) return cmd_reduce(ra, common);
        if (*bench) return cmd_bench(ba, common);
        if (*exp) return cmd_export(xa, common);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const OverflowError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ModeViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const EngineFault& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kMismatch;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMismatch;
    }
    return kUsage;
}
