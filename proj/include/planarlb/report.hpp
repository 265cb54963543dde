#pragma once

// Run reports. Everything except the "timing" object is a pure function of
// the inputs, so two runs with the same configuration produce identical
// reports once "timing" is dropped.

#include <cstdio>
#include <initializer_list>
#include <optional>
#include <string>

#include <json.hpp>

#include "planarlb/engines.hpp"
#include "planarlb/matrix.hpp"
#include "planarlb/reduction_apsp.hpp"
#include "planarlb/reduction_matching.hpp"
#include "planarlb/reduction_oumv.hpp"
#include "planarlb/reduction_variants.hpp"

namespace planarlb {

using ojson = nlohmann::ordered_json;

inline ojson matrix_rows_json(const Matrix& m) {
    ojson rows = ojson::array();
    for (int i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string inputs_digest(std::initializer_list<const Matrix*> ms) {
    Fnv1a h;
    for (const Matrix* m : ms) h.add(*m);
    return h.hex();
}

inline std::string digest_hex(std::uint64_t d) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d));
    return buf;
}

class RunReport {
  public:
    RunReport(std::string command, std::string reduction) {
        body_["tool"] = "planarlb";
        body_["command"] = std::move(command);
        body_["reduction"] = std::move(reduction);
    }

    ojson& body() { return body_; }
    [[nodiscard]] const ojson& body() const { return body_; }

    void set_config(ojson config) { body_["config"] = std::move(config); }
    void set_inputs_digest(std::string d) { body_["inputs_digest"] = std::move(d); }
    void set_oracle_match(std::optional<bool> m) {
        if (m)
            body_["oracle_match"] = *m;
        else
            body_["oracle_match"] = nullptr;
    }
    void set_ledger(const CostLedger& l) {
        body_["ledger"] = l.counts_json();
        timing_ = l.timing_json();
    }

    [[nodiscard]] ojson json(bool with_timing = true) const {
        ojson out = body_;
        if (with_timing) out["timing"] = timing_;
        return out;
    }
    [[nodiscard]] std::string dump(bool with_timing = true) const { return json(with_timing).dump(2) + "\n"; }

  private:
    ojson body_;
    ojson timing_ = ojson::object();
};

inline void fill_report(RunReport& r, const ApspRun& run, bool trace) {
    ojson& b = r.body();
    b["instance"] = {{"nodes", run.node_count}, {"edges", run.edge_count}};
    b["offset"] = run.offsets.offset;
    b["output"] = {{"product", matrix_rows_json(run.product)}};
    b["state_digest"] = {{"initial", digest_hex(run.initial_digest)}, {"final", digest_hex(run.final_digest)}};
    if (trace) {
        ojson t = ojson::array();
        for (const QueryTrace& q : run.trace)
            t.push_back({{"phase", q.phase}, {"j", q.j}, {"distance", q.distance}, {"entry", q.entry}});
        b["trace"] = std::move(t);
    }
    r.set_ledger(run.ledger);
}

inline void fill_report(RunReport& r, const MatchingRun& run, bool trace) {
    ojson& b = r.body();
    b["objective"] = to_string(run.objective);
    b["instance"] = {{"nodes", run.node_count}, {"edges", run.edge_count}};
    b["offset"] = run.offsets.offset;
    if (run.objective == MatchingObjective::max_weight) b["y"] = run.y;
    b["output"] = {{"product", matrix_rows_json(run.product)}};
    if (trace) {
        ojson t = ojson::array();
        for (const MatchingQueryTrace& q : run.trace)
            t.push_back({{"phase", q.phase},
                         {"j", q.j},
                         {"matching_weight", q.matching_weight},
                         {"distance", q.distance},
                         {"entry", q.entry}});
        b["trace"] = std::move(t);
    }
    r.set_ledger(run.ledger);
}

inline void fill_report(RunReport& r, const OuMvRun& run, bool trace) {
    ojson& b = r.body();
    b["instance"] = {{"nodes", run.node_count}, {"edges", run.edge_count}};
    b["threshold"] = run.threshold;
    b["output"] = {{"bits", run.bitstring()}};
    if (trace) {
        ojson t = ojson::array();
        for (const OuMvQuery& q : run.trace)
            t.push_back({{"phase", q.phase}, {"j", q.j}, {"distance", q.distance}, {"hit", q.hit}});
        b["trace"] = std::move(t);
    }
    r.set_ledger(run.ledger);
}

inline void fill_report(RunReport& r, const VariantRun& run, bool trace) {
    ojson& b = r.body();
    b["variant"] = to_string(run.variant);
    b["instance"] = {{"nodes", run.node_count}, {"edges", run.edge_count}};
    b["offset"] = run.offsets.offset;
    b["y"] = run.y;
    b["rho"] = run.rho;
    b["correction"] = run.correction;
    if (run.variant == Variant::diameter) b["diameter_unique"] = run.diameter_unique;
    b["output"] = {{"product", matrix_rows_json(run.product)}};
    if (trace) {
        ojson t = ojson::array();
        for (const VariantQueryTrace& q : run.trace) {
            ojson e = {{"phase", q.phase}, {"j", q.j}, {"answer", q.answer}, {"distance", q.distance}, {"entry", q.entry}};
            if (run.variant == Variant::diameter) e["unique_argmax"] = q.unique_argmax;
            t.push_back(std::move(e));
        }
        b["trace"] = std::move(t);
    }
    r.set_ledger(run.ledger);
}

} // namespace planarlb
