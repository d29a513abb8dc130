#include "skipalign/oracle.hpp"

#include <map>
#include <optional>
#include <queue>
#include <set>
#include <utility>

#include "skipalign/errors.hpp"
#include "skipalign/rewrite.hpp"
#include "skipalign/semantics.hpp"

namespace skipalign {

namespace {

void check_budget_fields(const OracleBudget& b) {
    if (b.max_model_executions == 0 || b.max_loop_unrollings == 0 ||
        b.max_alignment_length == 0)
        raise(Errc::InternalError, "oracle budget fields must be positive");
}

struct Edge {
    Move move;
    std::size_t pos;
    Configuration cfg;
    int cost = 0;
};

// Classical moves available from (pos, cfg): a log move on the next event,
// lenient model moves on every enabled leaf, and zero-cost synchronous moves
// on enabled visible leaves matching the next event.
struct Expander {
    const Model& m;
    const Trace& sigma;
    const OracleBudget& budget;
    std::size_t execs = 0;

    void charge() {
        if (++execs > budget.max_model_executions)
            raise(Errc::BudgetExceeded, "oracle model-execution budget exhausted");
    }

    std::vector<Edge> edges(std::size_t pos, const Configuration& c) {
        std::vector<Edge> out;
        if (pos < sigma.size()) {
            charge();
            out.push_back(Edge{Move::log(sigma[pos]), pos + 1, c, 1});
        }
        for (BlockId leaf : enabled_leaves(m, c)) {
            const Block& blk = m.block(leaf);
            charge();
            std::optional<Configuration> after = try_apply_model(m, c, leaf);
            if (!after) continue;
            if (pos < sigma.size() && blk.kind == BlockKind::Activity &&
                blk.label == sigma[pos]) {
                charge();
                out.push_back(Edge{Move::sync(blk.label, leaf), pos + 1, *after, 0});
            }
            int cost = blk.kind == BlockKind::Tau ? 0 : 1;
            out.push_back(Edge{Move::model(leaf), pos, std::move(*after), cost});
        }
        return out;
    }

    bool at_goal(std::size_t pos, const Configuration& c) const {
        return pos == sigma.size() && try_finalize(m, c, Replay::Lenient).has_value();
    }
};

int dijkstra_optimum(Expander& ex) {
    using Key = std::pair<std::size_t, Configuration>;
    std::map<Key, int> best;
    std::vector<Key> arena;
    // (g, insertion order, arena index), min-heap
    using QItem = std::tuple<int, std::uint64_t, std::size_t>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> open;
    std::uint64_t order = 0;

    arena.push_back(Key{0, initial_config(ex.m)});
    best[arena[0]] = 0;
    open.push({0, order++, 0});
    while (!open.empty()) {
        auto [g, ord, idx] = open.top();
        open.pop();
        Key key = std::move(arena[idx]);
        auto it = best.find(key);
        if (it == best.end() || it->second < g) continue;  // stale entry
        if (ex.at_goal(key.first, key.second)) return g;
        for (Edge& e : ex.edges(key.first, key.second)) {
            Key nk{e.pos, std::move(e.cfg)};
            int ng = g + e.cost;
            auto [bit, fresh] = best.emplace(nk, ng);
            if (!fresh) {
                if (bit->second <= ng) continue;
                bit->second = ng;
            }
            arena.push_back(std::move(nk));
            open.push({ng, order++, arena.size() - 1});
        }
    }
    raise(Errc::InternalError, "classical search found no complete execution");
}

// Depth-first collection of every goal path of cost exactly cstar. Per-path
// loop-iteration accounting keeps zero-cost tau cycles from recursing forever:
// exceeding the unrolling budget on a path that is still within cstar is a
// loud BudgetExceeded, never a silent cut.
struct PathCollector {
    Expander& ex;
    int cstar;
    std::vector<std::uint16_t> unrolls;
    std::set<MoveSeq> out;

    void dfs(std::size_t pos, const Configuration& c, int g, MoveSeq& moves) {
        if (moves.size() > ex.budget.max_alignment_length)
            raise(Errc::BudgetExceeded, "oracle alignment-length budget exhausted");
        if (ex.at_goal(pos, c) && g == cstar) out.insert(moves);
        for (Edge& e : ex.edges(pos, c)) {
            if (g + e.cost > cstar) continue;
            std::vector<std::uint16_t> saved = unrolls;
            if (e.move.kind != MoveKind::Log) account_unrolls(c, e.cfg);
            moves.push_back(e.move);
            dfs(e.pos, e.cfg, g + e.cost, moves);
            moves.pop_back();
            unrolls = std::move(saved);
        }
    }

    // A loop starts another iteration when a move takes it from after-do back
    // into its body; leaving Active resets the account (a fresh instance).
    void account_unrolls(const Configuration& before, const Configuration& after) {
        const Model& m = ex.m;
        for (BlockId b = 0; b < m.size(); ++b) {
            if (m.block(b).kind != BlockKind::Loop) continue;
            const BlockState& o = before.at(b);
            const BlockState& n = after.at(b);
            if (n.status != Status::Active) {
                unrolls[b] = 0;
            } else if (o.phase == LoopPhase::AfterDo && n.phase != LoopPhase::AfterDo) {
                if (++unrolls[b] > ex.budget.max_loop_unrollings)
                    raise(Errc::BudgetExceeded, "oracle loop-unrolling budget exhausted");
            }
        }
    }
};

}  // namespace

std::vector<Alignment> enumerate_all_optimal_alignments(const Model& m, const Trace& sigma,
                                                        const OracleBudget& budget) {
    check_budget_fields(budget);
    Expander ex{m, sigma, budget};
    int cstar = dijkstra_optimum(ex);
    PathCollector pc{ex, cstar, std::vector<std::uint16_t>(m.size(), 0), {}};
    MoveSeq moves;
    Configuration c0 = initial_config(m);
    pc.dfs(0, c0, 0, moves);
    std::vector<Alignment> out;
    out.reserve(pc.out.size());
    for (const MoveSeq& s : pc.out) out.push_back(Alignment{s});
    return out;
}

std::vector<SkipAlignment> coinciding_normal_forms(const Model& m, const Trace& sigma,
                                                   const OracleBudget& budget) {
    std::set<MoveSeq> forms;
    for (const Alignment& gamma : enumerate_all_optimal_alignments(m, sigma, budget))
        forms.insert(normalize(m, transform_to_skip(m, gamma)).moves);
    std::vector<SkipAlignment> out;
    out.reserve(forms.size());
    for (const MoveSeq& s : forms) out.push_back(SkipAlignment{s});
    return out;
}

std::vector<Alignment> expand_coinciding(const Model& m, const SkipAlignment& delta,
                                         const OracleBudget& budget) {
    Trace sigma = project_log(delta.moves);
    if (!validate_skip_alignment(m, sigma, delta))
        raise(Errc::InvalidAlignment, "not a skip alignment of its own log projection");
    MoveSeq target = normalize(m, delta).moves;
    std::vector<Alignment> out;
    for (Alignment& gamma : enumerate_all_optimal_alignments(m, sigma, budget))
        if (normalize(m, transform_to_skip(m, gamma)).moves == target)
            out.push_back(std::move(gamma));
    return out;
}

}  // namespace skipalign
