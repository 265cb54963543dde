#pragma once

// Dynamic distance engines. A reduction only talks to the abstract
// DynamicDistanceEngine; correctness of an engine is defined extensionally:
// after any update sequence, query(u, v) equals Dijkstra on the current graph.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "planarlb/error.hpp"
#include "planarlb/graph.hpp"
#include "planarlb/matrix.hpp"

namespace planarlb {

enum class UpdateMode : std::uint8_t { full, weight_only };

inline const char* to_string(UpdateMode m) { return m == UpdateMode::full ? "full" : "weight-only"; }

struct Update {
    enum class Kind : std::uint8_t { reweight, insert, remove };
    Kind kind = Kind::reweight;
    NodeId u = 0;
    NodeId v = 0;
    Weight w = 0; // ignored for remove

    static Update reweight(NodeId u, NodeId v, Weight w) { return {Kind::reweight, u, v, w}; }
    static Update insert(NodeId u, NodeId v, Weight w) { return {Kind::insert, u, v, w}; }
    static Update remove(NodeId u, NodeId v) { return {Kind::remove, u, v, 0}; }
};

// Internal work counters, used to check the cost model of an engine (e.g.
// that the naive engine never recomputes anything on update).
struct EngineStats {
    std::uint64_t sssp_runs = 0;   // single-source searches started
    std::uint64_t update_work = 0; // constant-time bookkeeping steps spent on updates
    std::uint64_t cache_hits = 0;
    std::uint64_t invalidations = 0; // cached maps dropped
};

// ---------------------------------------------------------------------------
// Cost ledger

struct CostLedger {
    std::uint64_t reweights = 0;
    std::uint64_t insertions = 0;
    std::uint64_t deletions = 0;
    std::uint64_t queries = 0;
    std::uint64_t increments = 0; // reweights that raised the weight
    std::uint64_t decrements = 0; // reweights that lowered the weight
    std::uint64_t checkpoints = 0;
    std::uint64_t rollbacks = 0;
    std::uint64_t rollback_ops = 0; // inverse updates replayed by rollbacks

    std::uint64_t reweight_ns = 0;
    std::uint64_t insert_ns = 0;
    std::uint64_t delete_ns = 0;
    std::uint64_t query_ns = 0;
    std::uint64_t rollback_ns = 0;

    [[nodiscard]] std::uint64_t updates() const { return reweights + insertions + deletions; }
    [[nodiscard]] std::uint64_t update_ns() const { return reweight_ns + insert_ns + delete_ns; }

    CostLedger& operator+=(const CostLedger& o) {
        reweights += o.reweights;
        insertions += o.insertions;
        deletions += o.deletions;
        queries += o.queries;
        increments += o.increments;
        decrements += o.decrements;
        checkpoints += o.checkpoints;
        rollbacks += o.rollbacks;
        rollback_ops += o.rollback_ops;
        reweight_ns += o.reweight_ns;
        insert_ns += o.insert_ns;
        delete_ns += o.delete_ns;
        query_ns += o.query_ns;
        rollback_ns += o.rollback_ns;
        return *this;
    }

    // Counts only; the deterministic part of a report.
    [[nodiscard]] nlohmann::ordered_json counts_json() const {
        nlohmann::ordered_json j;
        j["reweights"] = reweights;
        j["insertions"] = insertions;
        j["deletions"] = deletions;
        j["queries"] = queries;
        j["increments"] = increments;
        j["decrements"] = decrements;
        j["checkpoints"] = checkpoints;
        j["rollbacks"] = rollbacks;
        j["rollback_ops"] = rollback_ops;
        return j;
    }

    [[nodiscard]] nlohmann::ordered_json timing_json() const {
        nlohmann::ordered_json j;
        j["reweight_ns"] = reweight_ns;
        j["insert_ns"] = insert_ns;
        j["delete_ns"] = delete_ns;
        j["query_ns"] = query_ns;
        j["rollback_ns"] = rollback_ns;
        return j;
    }

    // One entry per operation class: {"op", "count", "total_ns"}.
    [[nodiscard]] nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& [op, count, ns] : per_class()) {
            nlohmann::ordered_json r;
            r["op"] = op;
            r["count"] = count;
            r["total_ns"] = ns;
            rows.push_back(std::move(r));
        }
        return rows;
    }

    [[nodiscard]] std::string to_csv() const {
        std::string out = "op,count,total_ns\n";
        for (const auto& [op, count, ns] : per_class())
            out += std::string(op) + ',' + std::to_string(count) + ',' + std::to_string(ns) + '\n';
        return out;
    }

  private:
    struct ClassRow {
        const char* op;
        std::uint64_t count;
        std::uint64_t ns;
    };
    [[nodiscard]] std::vector<ClassRow> per_class() const {
        return {{"reweight", reweights, reweight_ns},
                {"insert", insertions, insert_ns},
                {"delete", deletions, delete_ns},
                {"query", queries, query_ns},
                {"rollback", rollbacks, rollback_ns}};
    }
};

// ---------------------------------------------------------------------------
// Contract

class DynamicDistanceEngine {
  public:
    virtual ~DynamicDistanceEngine() = default;

    [[nodiscard]] virtual std::string name() const = 0;

    // Replace the whole state by `g`. Not counted as updates.
    virtual void load(const Graph& g, UpdateMode mode) = 0;

    [[nodiscard]] virtual UpdateMode mode() const = 0;
    [[nodiscard]] virtual bool directed() const = 0;
    [[nodiscard]] virtual bool supports_directed() const { return true; }
    [[nodiscard]] virtual std::size_t node_count() const = 0;

    virtual void apply(const Update& up) = 0;
    [[nodiscard]] virtual Weight query(NodeId u, NodeId v) = 0;

    // Single-value queries over the current graph.
    [[nodiscard]] virtual Weight query_girth() { return directed_girth(snapshot()); }
    [[nodiscard]] virtual DiameterInfo query_diameter() { return graph_diameter(snapshot()); }

    [[nodiscard]] virtual std::optional<Weight> edge_weight(NodeId u, NodeId v) const = 0;
    [[nodiscard]] virtual Graph snapshot() const = 0;
    // Order-independent hash of the current edge set and weights.
    [[nodiscard]] virtual std::uint64_t digest() const = 0;
    [[nodiscard]] virtual EngineStats stats() const = 0;
};

namespace detail {

// Mutable adjacency shared by the concrete engines. Deleted edges keep
// their slot so that re-insertion of the same pair reuses it.
class GraphState {
  public:
    void load(const Graph& g, UpdateMode mode) {
        directed_ = g.directed();
        mode_ = mode;
        nodes_ = g.nodes();
        bound_ = g.weight_bound();
        slots_.clear();
        index_.clear();
        adj_.assign(g.node_count(), {});
        for (const Edge& e : g.edges()) add_slot(e.u, e.v, e.w);
        live_edges_ = g.edge_count();
    }

    [[nodiscard]] bool directed() const { return directed_; }
    [[nodiscard]] UpdateMode mode() const { return mode_; }
    [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }

    void apply(const Update& up) {
        check_node(up.u);
        check_node(up.v);
        const auto key = edge_key(up.u, up.v, directed_);
        auto it = index_.find(key);
        const bool live = it != index_.end() && slots_[it->second].live;
        switch (up.kind) {
        case Update::Kind::reweight:
            if (!live) throw UnknownEdge("reweight of absent edge (" + std::to_string(up.u) + "," + std::to_string(up.v) + ")");
            check_weight(up.w);
            slots_[it->second].w = up.w;
            return;
        case Update::Kind::insert:
            if (mode_ == UpdateMode::weight_only) throw ModeViolation("edge insertion under weight-only update mode");
            if (live) throw UnknownEdge("insert of existing edge (" + std::to_string(up.u) + "," + std::to_string(up.v) + ")");
            if (up.u == up.v) throw InvalidArgument("self-loop insertion");
            check_weight(up.w);
            if (it != index_.end()) {
                slots_[it->second].live = true;
                slots_[it->second].w = up.w;
            } else {
                add_slot(up.u, up.v, up.w);
            }
            ++live_edges_;
            return;
        case Update::Kind::remove:
            if (mode_ == UpdateMode::weight_only) throw ModeViolation("edge deletion under weight-only update mode");
            if (!live) throw UnknownEdge("delete of absent edge (" + std::to_string(up.u) + "," + std::to_string(up.v) + ")");
            slots_[it->second].live = false;
            --live_edges_;
            return;
        }
    }

    [[nodiscard]] std::optional<Weight> weight(NodeId u, NodeId v) const {
        auto it = index_.find(edge_key(u, v, directed_));
        if (it == index_.end() || !slots_[it->second].live) return std::nullopt;
        return slots_[it->second].w;
    }

    // Dijkstra from `source`; stops early once `target` is settled.
    const std::vector<Weight>& search(NodeId source, NodeId target = kNoNode) {
        check_node(source);
        dist_.assign(nodes_.size(), kUnreachable);
        using Item = std::pair<Weight, NodeId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist_[source] = 0;
        pq.emplace(0, source);
        while (!pq.empty()) {
            auto [d, x] = pq.top();
            pq.pop();
            if (d != dist_[x]) continue;
            if (x == target) break;
            for (std::uint32_t s : adj_[x]) {
                const Slot& sl = slots_[s];
                if (!sl.live) continue;
                const NodeId y = sl.u == x ? sl.v : sl.u;
                const Weight nd = d + sl.w;
                if (nd < dist_[y]) {
                    dist_[y] = nd;
                    pq.emplace(nd, y);
                }
            }
        }
        return dist_;
    }

    [[nodiscard]] Graph snapshot() const {
        std::vector<Edge> edges;
        edges.reserve(live_edges_);
        for (const Slot& s : slots_)
            if (s.live) edges.push_back(Edge{s.u, s.v, s.w});
        return Graph(directed_, nodes_, std::move(edges));
    }

    [[nodiscard]] std::uint64_t digest() const {
        std::vector<std::pair<std::uint64_t, Weight>> live;
        live.reserve(live_edges_);
        for (const Slot& s : slots_)
            if (s.live) live.emplace_back(edge_key(s.u, s.v, directed_), s.w);
        std::sort(live.begin(), live.end());
        Fnv1a h;
        h.add(directed_ ? 1u : 0u);
        h.add(nodes_.size());
        for (auto [k, w] : live) {
            h.add(k);
            h.add(static_cast<std::uint64_t>(w));
        }
        return h.value();
    }

    void check_node(NodeId v) const {
        if (v >= nodes_.size()) throw UnknownEdge("unknown node " + std::to_string(v));
    }

  private:
    struct Slot {
        NodeId u;
        NodeId v;
        Weight w;
        bool live;
    };

    void add_slot(NodeId u, NodeId v, Weight w) {
        const auto id = static_cast<std::uint32_t>(slots_.size());
        slots_.push_back(Slot{u, v, w, true});
        index_.emplace(edge_key(u, v, directed_), id);
        adj_[u].push_back(id);
        if (!directed_) adj_[v].push_back(id);
    }

    void check_weight(Weight w) const {
        if (w < 0) throw InvalidArgument("negative edge weight");
        if (w > bound_) throw OverflowError("edge weight exceeds the graph's weight bound");
    }

    bool directed_ = false;
    UpdateMode mode_ = UpdateMode::full;
    std::vector<NodeInfo> nodes_;
    Weight bound_ = Graph::kDefaultWeightBound;
    std::vector<Slot> slots_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
    std::vector<std::vector<std::uint32_t>> adj_;
    std::vector<Weight> dist_;
    std::size_t live_edges_ = 0;
};

} // namespace detail

// ---------------------------------------------------------------------------
// Concrete engines

// Updates only touch the edge table; every query runs a fresh Dijkstra.
class NaiveDijkstraEngine final : public DynamicDistanceEngine {
  public:
    [[nodiscard]] std::string name() const override { return "naive"; }
    void load(const Graph& g, UpdateMode mode) override { state_.load(g, mode); }
    [[nodiscard]] UpdateMode mode() const override { return state_.mode(); }
    [[nodiscard]] bool directed() const override { return state_.directed(); }
    [[nodiscard]] std::size_t node_count() const override { return state_.node_count(); }

    void apply(const Update& up) override {
        state_.apply(up);
        ++stats_.update_work;
    }

    [[nodiscard]] Weight query(NodeId u, NodeId v) override {
        state_.check_node(v);
        ++stats_.sssp_runs;
        return state_.search(u, v)[v];
    }

    [[nodiscard]] std::optional<Weight> edge_weight(NodeId u, NodeId v) const override { return state_.weight(u, v); }
    [[nodiscard]] Graph snapshot() const override { return state_.snapshot(); }
    [[nodiscard]] std::uint64_t digest() const override { return state_.digest(); }
    [[nodiscard]] EngineStats stats() const override { return stats_; }

  private:
    detail::GraphState state_;
    EngineStats stats_;
};

// Keeps full single-source distance maps per queried source; any update
// drops all of them.
class CachedSSSPEngine final : public DynamicDistanceEngine {
  public:
    [[nodiscard]] std::string name() const override { return "cached"; }
    void load(const Graph& g, UpdateMode mode) override {
        state_.load(g, mode);
        drop_cache();
    }
    [[nodiscard]] UpdateMode mode() const override { return state_.mode(); }
    [[nodiscard]] bool directed() const override { return state_.directed(); }
    [[nodiscard]] std::size_t node_count() const override { return state_.node_count(); }

    void apply(const Update& up) override {
        state_.apply(up);
        ++stats_.update_work;
        drop_cache();
    }

    [[nodiscard]] Weight query(NodeId u, NodeId v) override {
        state_.check_node(u);
        state_.check_node(v);
        if (auto it = cache_.find(u); it != cache_.end()) {
            ++stats_.cache_hits;
            return it->second[v];
        }
        if (!state_.directed()) {
            if (auto it = cache_.find(v); it != cache_.end()) {
                ++stats_.cache_hits;
                return it->second[u];
            }
        }
        ++stats_.sssp_runs;
        const auto& dist = state_.search(u);
        return cache_.emplace(u, dist).first->second[v];
    }

    [[nodiscard]] std::optional<Weight> edge_weight(NodeId u, NodeId v) const override { return state_.weight(u, v); }
    [[nodiscard]] Graph snapshot() const override { return state_.snapshot(); }
    [[nodiscard]] std::uint64_t digest() const override { return state_.digest(); }
    [[nodiscard]] EngineStats stats() const override { return stats_; }

  private:
    void drop_cache() {
        stats_.invalidations += cache_.size();
        cache_.clear();
    }

    detail::GraphState state_;
    std::unordered_map<NodeId, std::vector<Weight>> cache_;
    EngineStats stats_;
};

inline std::unique_ptr<DynamicDistanceEngine> make_engine(const std::string& name) {
    if (name == "naive") return std::make_unique<NaiveDijkstraEngine>();
    if (name == "cached") return std::make_unique<CachedSSSPEngine>();
    throw InvalidArgument("unknown engine '" + name + "' (expected naive or cached)");
}

inline std::vector<std::string> engine_names() { return {"naive", "cached"}; }

// ---------------------------------------------------------------------------
// Wrappers

// Forwards everything to `inner` and records exact counts and wall-clock
// time per operation class. Never changes an answer.
class CountingEngine final : public DynamicDistanceEngine {
  public:
    explicit CountingEngine(DynamicDistanceEngine& inner) : inner_(inner) {}

    [[nodiscard]] std::string name() const override { return inner_.name(); }
    void load(const Graph& g, UpdateMode mode) override { inner_.load(g, mode); }
    [[nodiscard]] UpdateMode mode() const override { return inner_.mode(); }
    [[nodiscard]] bool directed() const override { return inner_.directed(); }
    [[nodiscard]] bool supports_directed() const override { return inner_.supports_directed(); }
    [[nodiscard]] std::size_t node_count() const override { return inner_.node_count(); }

    void apply(const Update& up) override {
        std::optional<Weight> before;
        if (up.kind == Update::Kind::reweight) before = inner_.edge_weight(up.u, up.v);
        const auto t0 = Clock::now();
        inner_.apply(up);
        const auto ns = elapsed(t0);
        switch (up.kind) {
        case Update::Kind::reweight:
            ++ledger_.reweights;
            ledger_.reweight_ns += ns;
            if (before && up.w > *before) ++ledger_.increments;
            if (before && up.w < *before) ++ledger_.decrements;
            break;
        case Update::Kind::insert:
            ++ledger_.insertions;
            ledger_.insert_ns += ns;
            break;
        case Update::Kind::remove:
            ++ledger_.deletions;
            ledger_.delete_ns += ns;
            break;
        }
    }

    [[nodiscard]] Weight query(NodeId u, NodeId v) override {
        const auto t0 = Clock::now();
        const Weight d = inner_.query(u, v);
        ledger_.query_ns += elapsed(t0);
        ++ledger_.queries;
        return d;
    }

    [[nodiscard]] Weight query_girth() override {
        const auto t0 = Clock::now();
        const Weight g = inner_.query_girth();
        ledger_.query_ns += elapsed(t0);
        ++ledger_.queries;
        return g;
    }

    [[nodiscard]] DiameterInfo query_diameter() override {
        const auto t0 = Clock::now();
        const DiameterInfo d = inner_.query_diameter();
        ledger_.query_ns += elapsed(t0);
        ++ledger_.queries;
        return d;
    }

    [[nodiscard]] std::optional<Weight> edge_weight(NodeId u, NodeId v) const override { return inner_.edge_weight(u, v); }
    [[nodiscard]] Graph snapshot() const override { return inner_.snapshot(); }
    [[nodiscard]] std::uint64_t digest() const override { return inner_.digest(); }
    [[nodiscard]] EngineStats stats() const override { return inner_.stats(); }

    [[nodiscard]] const CostLedger& ledger() const { return ledger_; }
    CostLedger& ledger() { return ledger_; }

  private:
    using Clock = std::chrono::steady_clock;
    static std::uint64_t elapsed(Clock::time_point t0) {
        return static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
    }

    DynamicDistanceEngine& inner_;
    CostLedger ledger_;
};

// Records the inverse of every update applied since the oldest open
// checkpoint. rollback() replays inverses of the newest checkpoint in reverse
// order. With increment_only, any weight decrease or deletion outside a
// rollback is rejected.
class JournalingEngine final : public DynamicDistanceEngine {
  public:
    using Token = std::size_t;

    explicit JournalingEngine(DynamicDistanceEngine& inner) : inner_(inner) {}

    [[nodiscard]] std::string name() const override { return inner_.name(); }
    void load(const Graph& g, UpdateMode mode) override {
        inner_.load(g, mode);
        journal_.clear();
        marks_.clear();
    }
    [[nodiscard]] UpdateMode mode() const override { return inner_.mode(); }
    [[nodiscard]] bool directed() const override { return inner_.directed(); }
    [[nodiscard]] bool supports_directed() const override { return inner_.supports_directed(); }
    [[nodiscard]] std::size_t node_count() const override { return inner_.node_count(); }

    void set_increment_only(bool on) { increment_only_ = on; }
    [[nodiscard]] bool increment_only() const { return increment_only_; }

    void apply(const Update& up) override {
        Update inverse;
        switch (up.kind) {
        case Update::Kind::reweight: {
            const auto old = inner_.edge_weight(up.u, up.v);
            if (!old) throw UnknownEdge("reweight of absent edge (" + std::to_string(up.u) + "," + std::to_string(up.v) + ")");
            if (increment_only_ && up.w < *old)
                throw ModeViolation("weight decrement on (" + std::to_string(up.u) + "," + std::to_string(up.v) +
                                    ") rejected by increment-only engine");
            inverse = Update::reweight(up.u, up.v, *old);
            break;
        }
        case Update::Kind::insert: inverse = Update::remove(up.u, up.v); break;
        case Update::Kind::remove: {
            if (increment_only_) throw ModeViolation("edge deletion rejected by increment-only engine");
            const auto old = inner_.edge_weight(up.u, up.v);
            if (!old) throw UnknownEdge("delete of absent edge (" + std::to_string(up.u) + "," + std::to_string(up.v) + ")");
            inverse = Update::insert(up.u, up.v, *old);
            break;
        }
        }
        inner_.apply(up);
        if (!marks_.empty()) journal_.push_back(inverse);
    }

    Token checkpoint() {
        marks_.push_back(journal_.size());
        ++checkpoints_;
        return marks_.size();
    }

    // Restores the state at the most recent open checkpoint and closes it.
    void rollback() {
        if (marks_.empty()) throw ContractViolation("rollback without an open checkpoint");
        const std::size_t mark = marks_.back();
        while (journal_.size() > mark) {
            inner_.apply(journal_.back());
            journal_.pop_back();
            ++rollback_ops_;
        }
        marks_.pop_back();
        ++rollbacks_;
    }

    [[nodiscard]] std::size_t journal_size() const { return journal_.size(); }
    [[nodiscard]] std::size_t open_checkpoints() const { return marks_.size(); }
    [[nodiscard]] std::uint64_t rollback_ops() const { return rollback_ops_; }
    [[nodiscard]] std::uint64_t rollbacks() const { return rollbacks_; }
    [[nodiscard]] std::uint64_t checkpoints() const { return checkpoints_; }

    [[nodiscard]] Weight query(NodeId u, NodeId v) override { return inner_.query(u, v); }
    [[nodiscard]] Weight query_girth() override { return inner_.query_girth(); }
    [[nodiscard]] DiameterInfo query_diameter() override { return inner_.query_diameter(); }
    [[nodiscard]] std::optional<Weight> edge_weight(NodeId u, NodeId v) const override { return inner_.edge_weight(u, v); }
    [[nodiscard]] Graph snapshot() const override { return inner_.snapshot(); }
    [[nodiscard]] std::uint64_t digest() const override { return inner_.digest(); }
    [[nodiscard]] EngineStats stats() const override { return inner_.stats(); }

  private:
    DynamicDistanceEngine& inner_;
    std::vector<Update> journal_;
    std::vector<std::size_t> marks_;
    bool increment_only_ = false;
    std::uint64_t rollback_ops_ = 0;
    std::uint64_t rollbacks_ = 0;
    std::uint64_t checkpoints_ = 0;
};

} // namespace planarlb
