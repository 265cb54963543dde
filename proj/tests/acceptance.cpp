// Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "planarlb/planarlb.hpp"

using namespace planarlb;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

int failures = 0;

void criterion(const char* id, const char* what, double limit_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && limit_s > 0 && secs >= limit_s) o.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(limit_s));
    std::printf("[%s] %s %s (%.2f s%s%s)\n", o.ok ? "PASS" : "FAIL", id, what, secs, o.ok ? "" : ": ",
                o.ok ? "" : o.detail.c_str());
    std::fflush(stdout);
    failures += o.ok ? 0 : 1;
}

int rand_in(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

struct Instance {
    Matrix a, b;
    Weight x;
};

std::vector<Instance> apsp_instances(std::uint64_t seed, int count, int max_dim, int max_x) {
    std::mt19937_64 rng(seed);
    std::vector<Instance> out;
    for (int t = 0; t < count; ++t) {
        const int n = rand_in(rng, 1, max_dim), na = rand_in(rng, 1, max_dim), nb = rand_in(rng, 1, max_dim);
        const Weight x = rand_in(rng, 1, max_x);
        Matrix a = random_matrix(n, nb, 0, x, rng);
        Matrix b = random_matrix(nb, na, 0, x, rng);
        out.push_back({std::move(a), std::move(b), x});
    }
    return out;
}

// The variant graph at the j-th query of a phase: switchable edges dropped,
// then the j-th pair activated.
Graph activated(const VariantInstance& vi, int j) {
    auto same = [](const Edge& e, std::pair<NodeId, NodeId> p) {
        return (e.u == p.first && e.v == p.second) || (e.u == p.second && e.v == p.first);
    };
    std::vector<Edge> edges;
    for (const Edge& e : vi.graph.edges()) {
        bool sw = false;
        for (std::size_t q = 0; q < vi.first.size(); ++q)
            sw = sw || same(e, vi.first[q]) || (q < vi.second.size() && same(e, vi.second[q]));
        if (!sw) edges.push_back(e);
    }
    edges.push_back(Edge{vi.first[j - 1].first, vi.first[j - 1].second, vi.active});
    if (!vi.second.empty()) edges.push_back(Edge{vi.second[j - 1].first, vi.second[j - 1].second, vi.active});
    return Graph(vi.graph.directed(), vi.graph.nodes(), std::move(edges));
}

void ac1(Outcome& o) {
    std::mt19937_64 rng(1001);
    std::size_t checked = 0;
    for (int r = 1; r <= 6; ++r)
        for (int c = 1; c <= 6; ++c)
            for (int t = 0; t < 66 && o.ok; ++t) {
                const Matrix m = t == 0 ? Matrix(r, c, 1) : t == 1 ? Matrix(r, c, 0) : random_boolean_matrix(r, c, rng);
                const GridEmbedding e = embed_boolean(m);
                for (int j = 1; j <= c; ++j) {
                    const DistanceMap dm = dijkstra(e.graph, e.handles.a(j));
                    for (int k = 1; k <= r; ++k, ++checked)
                        if (dm[e.handles.b(k)] != closed_form_distance({r, c, j, k, m.at1(k, j)}))
                            o.fail("a->b mismatch at " + std::to_string(r) + "x" + std::to_string(c));
                }
                for (int i = 1; i < r; ++i)
                    for (int j = 1; j <= c; ++j) {
                        const DistanceMap dm = dijkstra(e.graph, e.handles.u(i, j));
                        for (int k = i + 1; k <= r; ++k, ++checked)
                            if (dm[e.handles.b(k)] != closed_form_interior_distance(r, c, i, j, k, m.at1(k, j)))
                                o.fail("u->b mismatch at " + std::to_string(r) + "x" + std::to_string(c));
                    }
            }
    if (checked == 0) o.fail("nothing checked");
}

void ac2(Outcome& o) {
    std::mt19937_64 rng(1002);
    for (int r = 1; r <= 6; ++r)
        for (int c = 1; c <= 6; ++c)
            for (Weight x = 2; x <= 10; ++x) {
                const Matrix m = random_matrix(r, c, 0, x, rng);
                const GridEmbedding e = embed_weighted(m, x);
                for (int j = 1; j <= c; ++j) {
                    const DistanceMap dm = dijkstra(e.graph, e.handles.a(j));
                    for (int k = 1; k <= r; ++k)
                        if (dm[e.handles.b(k)] != closed_form_distance({r, c, j, k, m.at1(k, j), x}))
                            o.fail("weighted mismatch at " + std::to_string(r) + "x" + std::to_string(c));
                }
            }
}

const std::vector<Instance>& shared_instances() {
    static const std::vector<Instance> v = apsp_instances(1003, 100, 12, 50);
    return v;
}

void ac3(Outcome& o) {
    for (const Instance& in : shared_instances()) {
        const Matrix want = min_plus_product(in.a, in.b);
        for (const std::string& name : engine_names())
            for (UpdateMode mode : {UpdateMode::full, UpdateMode::weight_only}) {
                auto e = make_engine(name);
                ApspOptions opts;
                opts.mode = mode;
                const ApspRun run = run_apsp_reduction(in.a, in.b, in.x, *e, opts);
                if (!(run.product == want)) o.fail("product mismatch, engine " + name);
                const auto rw = static_cast<std::uint64_t>(in.a.rows() * in.a.cols());
                const auto q = static_cast<std::uint64_t>(in.a.rows() * in.b.cols());
                if (run.ledger.reweights != rw || run.ledger.queries != q ||
                    run.ledger.insertions + run.ledger.deletions != 0)
                    o.fail("ledger mismatch, engine " + name);
            }
    }
}

void ac4(Outcome& o) {
    for (const Instance& in : shared_instances())
        for (const std::string& name : engine_names()) {
            auto inner = make_engine(name);
            JournalingEngine journal(*inner);
            const ApspRun run = run_incremental_worstcase(in.a, in.b, in.x, journal);
            if (!(run.product == min_plus_product(in.a, in.b))) o.fail("product mismatch");
            if (run.final_digest != run.initial_digest) o.fail("state not restored");
            if (run.ledger.decrements != 0) o.fail("decrement observed");
        }
}

void ac5(Outcome& o) {
    const std::vector<Instance> ins = apsp_instances(1005, 30, 4, 20);
    for (const Instance& in : ins) {
        const SplitGraph sg = build_split_instance(in.b, in.x);
        const PeelResult peel = verify_unique_pm(sg);
        if (peel.verdict != PeelVerdict::unique || peel.weight != 0) o.fail("base split instance not UNIQUE(0)");
        NaiveDijkstraEngine ne;
        ApspOptions ao;
        ao.record_trace = true;
        const ApspRun apsp = run_apsp_reduction(in.a, in.b, in.x, ne, ao);
        const Matrix want = min_plus_product(in.a, in.b);
        for (MatchingObjective obj : {MatchingObjective::min_perfect, MatchingObjective::max_weight}) {
            MatchingOptions opts;
            opts.record_trace = true;
            const MatchingRun run = run_matching_reduction(in.a, in.b, in.x, obj, opts);
            if (!(run.product == want)) o.fail("matching product mismatch");
            if (run.trace.size() != apsp.trace.size()) {
                o.fail("trace length mismatch");
                continue;
            }
            for (std::size_t q = 0; q < run.trace.size(); ++q)
                if (run.trace[q].distance != apsp.trace[q].distance) o.fail("matching distance != APSP distance");
        }
    }
}

void ac6(Outcome& o) {
    std::mt19937_64 rng(1006);
    std::bernoulli_distribution coin(0.5);
    for (int t = 0; t < 50; ++t) {
        const int r = rand_in(rng, 1, 6), c = rand_in(rng, 1, 6);
        const Matrix m = random_boolean_matrix(r, c, rng);
        std::vector<BoolVectorPair> pairs(10);
        for (auto& p : pairs) {
            for (int k = 0; k < r; ++k) p.u.push_back(coin(rng) ? 1 : 0);
            for (int j = 0; j < c; ++j) p.v.push_back(coin(rng) ? 1 : 0);
        }
        const UnitInstance inst = build_unit_instance(m);
        CachedSSSPEngine e;
        OuMvOptions opts;
        opts.record_trace = true;
        const OuMvRun run = run_oumv(inst, e, pairs, opts);
        for (std::size_t q = 0; q < pairs.size(); ++q)
            if (run.bits[q] != oumv_answer(m, pairs[q].u, pairs[q].v)) o.fail("bit mismatch");
        for (const OuMvQuery& q : run.trace) {
            if (q.distance < run.threshold) o.fail("distance below threshold");
            if (q.hit != (q.distance == run.threshold)) o.fail("hit flag inconsistent");
        }
    }
}

void ac7(Outcome& o) {
    const std::vector<Instance> ins = apsp_instances(1007, 12, 3, 6);
    for (const Instance& in : ins) {
        NaiveDijkstraEngine ne;
        ApspOptions ao;
        ao.record_trace = true;
        const ApspRun apsp = run_apsp_reduction(in.a, in.b, in.x, ne, ao);
        for (Variant v : {Variant::st, Variant::girth, Variant::diameter})
            for (UpdateMode mode : {UpdateMode::full, UpdateMode::weight_only}) {
                CachedSSSPEngine e;
                VariantOptions opts;
                opts.mode = mode;
                opts.record_trace = true;
                const VariantRun run = run_variant_reduction(in.a, in.b, in.x, v, e, opts);
                const Weight corr = v == Variant::girth ? 1 : 2 * run.y;
                for (std::size_t q = 0; q < run.trace.size(); ++q)
                    if (run.trace[q].answer - corr != apsp.trace.at(q).distance)
                        o.fail(std::string(to_string(v)) + " answer does not track the APSP distance");
                if (!(run.product == apsp.product)) o.fail("variant product mismatch");
            }
        // brute-force argmax of the diameter instance at each column
        const VariantInstance vi = build_variant_instance(in.b, in.x, Variant::diameter);
        for (int j = 1; j <= vi.base.cols; ++j) {
            const auto d = floyd_warshall(activated(vi, j));
            Weight best = 0;
            std::size_t count = 0;
            for (std::size_t u = 0; u < d.size(); ++u)
                for (std::size_t w = u + 1; w < d.size(); ++w) {
                    if (d[u][w] > best) {
                        best = d[u][w];
                        count = 1;
                    } else if (d[u][w] == best) {
                        ++count;
                    }
                }
            if (count != 1 || best != d[vi.s][vi.t]) o.fail("diameter argmax is not uniquely {s,t}");
        }
    }
}

void ac8(Outcome& o) {
    std::mt19937_64 rng(1008);
    for (int r = 1; r <= 6; ++r)
        for (int c = 1; c <= 6; ++c) {
            const Weight x = rand_in(rng, 1, 9);
            const Matrix m = random_matrix(r, c, 0, x, rng);
            const std::vector<Graph> graphs{embed_weighted(m, x).graph, embed_mirrored(r, c, x * x).graph,
                                            assemble_double_grid(m, x).graph, assemble_double_grid(m, x, 1).graph,
                                            embed_boolean(random_boolean_matrix(r, c, rng)).graph};
            for (const Graph& g : graphs) {
                const ValidationReport rep = validate_grid_subgraph(g);
                if (!rep.valid()) o.fail("grid validation: " + std::to_string(rep.violations.size()) + " violations");
            }
            const UnitPlanarityReport up = check_unit_planarity(build_unit_instance(random_boolean_matrix(r, c, rng)));
            if (!up.passed()) o.fail("unit planarity: " + (up.problems.empty() ? "" : up.problems.front()));
        }
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void ac9(Outcome& o) {
    const fs::path dir = fs::temp_directory_path() / ("planarlb_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path csv = dir / "bench.csv", err = dir / "bench.err";
    const std::string cmd = std::string(PLANARLB_CLI_PATH) + " bench --engines naive --sizes 32 --x 8 --csv " +
                            csv.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        o.fail("bench exited with status " + std::to_string(status));
        return;
    }
    std::istringstream in(slurp(csv));
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    if (header != "engine,n,n_alpha,n_beta,X,updates,queries,update_ns_total,query_ns_total") o.fail("bad header");
    std::vector<std::string> f;
    std::istringstream rs(row);
    for (std::string cell; std::getline(rs, cell, ',');) f.push_back(cell);
    if (f.size() != 9) {
        o.fail("bad row '" + row + "'");
        return;
    }
    if (std::stoll(f[5]) != 32 * 32) o.fail("updates " + f[5] + " != n*n_beta");
    if (std::stoll(f[6]) != 32 * 32) o.fail("queries " + f[6] + " != n*n_alpha");
    // naive stats: update_work counts updates one for one, graph searches only on queries
    const std::string stats = slurp(err);
    if (stats.find("sssp_runs=1024 ") == std::string::npos || stats.find("update_work=1024") == std::string::npos)
        o.fail("naive engine stats: " + stats);
    if (stats.find("nodes=") == std::string::npos) o.fail("no node count reported");
    fs::remove_all(dir);
}

} // namespace

int main() {
    criterion("AC1", "boolean closed-form distances, R,C <= 6", 10, ac1);
    criterion("AC2", "weighted closed-form distances, X in 2..10", 10, ac2);
    criterion("AC3", "APSP reduction equals min-plus product, exact ledger", 60, ac3);
    criterion("AC4", "incremental driver restores state, no decrements", 60, ac4);
    criterion("AC5", "matching reduction in MIN and MAX mode", 120, ac5);
    criterion("AC6", "OuMv bits and threshold separation", 60, ac6);
    criterion("AC7", "st / girth / diameter variants", 60, ac7);
    criterion("AC8", "grid validity and unit planarity", 0, ac8);
    criterion("AC9", "bench at n = 32 with the naive engine", 60, ac9);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
