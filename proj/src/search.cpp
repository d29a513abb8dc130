#include "skipalign/search.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <utility>

#include "skipalign/errors.hpp"
#include "skipalign/rewrite.hpp"

namespace skipalign {

namespace {

int remainder_of(const Model& m, const Configuration& c, BlockId b) {
    const BlockState& s = c.at(b);
    const Block& blk = m.block(b);
    if (s.status == Status::Done) return 0;
    if (s.status == Status::Future) return blk.kappa;
    switch (blk.kind) {
    case BlockKind::Activity:
    case BlockKind::Tau:
        return blk.kappa;
    case BlockKind::Seq: {
        int sum = 0;
        for (std::size_t k = s.cursor; k < blk.children.size(); ++k)
            sum += k == s.cursor ? remainder_of(m, c, blk.children[k])
                                 : m.block(blk.children[k]).kappa;
        return sum;
    }
    case BlockKind::Xor:
        return s.chosen >= 0 ? remainder_of(m, c, blk.children[(std::size_t)s.chosen])
                             : blk.kappa;
    case BlockKind::And: {
        int sum = 0;
        for (BlockId ch : blk.children) sum += remainder_of(m, c, ch);
        return sum;
    }
    case BlockKind::Loop:
        switch (s.phase) {
        case LoopPhase::InDo: return remainder_of(m, c, blk.children[0]);
        case LoopPhase::AfterDo: return 0;
        case LoopPhase::InRedo:
            return remainder_of(m, c, blk.children[1]) + m.block(blk.children[0]).kappa;
        default: return blk.kappa;
        }
    }
    return blk.kappa;
}

// Fires a sync or skip element strictly; used to walk prefixes that the
// search itself produced.
std::optional<Configuration> element_step(const Model& m, const Configuration& c,
                                          const Move& mv) {
    switch (mv.kind) {
    case MoveKind::Log: return c;
    case MoveKind::Sync: return try_apply_sync(m, c, mv.block, Replay::Strict);
    case MoveKind::Skip: return try_apply_skip(m, c, mv.block, Replay::Strict);
    default: return std::nullopt;
    }
}

bool is_goal(const Model& m, const Trace& sigma, const SearchState& s) {
    return s.consumed == sigma.size() && is_final(m, s.cfg);
}

// Would the appended sync let some skip of the trailing run hop past it (an R2
// redex)? run[k] was fired from before[k]; the hop replays iff the rest of the
// run, then the sync, then run[k] all fire strictly from there. Every skip of
// an accepted prefix is pinned by the first sync after it, so checking the
// trailing run against the new sync is exhaustive.
bool sync_hop_reduces(const Model& m, const std::vector<Move>& run,
                      const std::vector<Configuration>& before, const Move& sync_mv) {
    for (std::size_t k = 0; k < run.size(); ++k) {
        Configuration c = before[k];
        bool alive = true;
        for (std::size_t t = k + 1; t < run.size() && alive; ++t) {
            std::optional<Configuration> next = element_step(m, c, run[t]);
            if (!next) alive = false;
            else c = std::move(*next);
        }
        if (!alive) continue;
        std::optional<Configuration> mid = element_step(m, c, sync_mv);
        if (!mid) continue;
        if (element_step(m, *mid, run[k])) return true;
    }
    return false;
}

// Walks one appended move group, rejecting it as soon as a newly formed
// adjacent pair reduces. `prev`/`before_prev` describe the last move of the
// existing prefix and the configuration in front of it.
struct GroupWalker {
    const Model& m;
    bool have_prev;
    Move prev;
    Configuration before_prev;
    Configuration cur;

    bool advance(const Move& next) {
        if (have_prev && reduction_pair(m, before_prev, prev, next)) return false;
        if (next.kind != MoveKind::Log) {
            std::optional<Configuration> stepped = element_step(m, cur, next);
            if (!stepped)
                raise(Errc::InternalError, "successor move does not replay");
            before_prev = std::move(cur);
            cur = std::move(*stepped);
        } else {
            before_prev = cur;
        }
        prev = next;
        have_prev = true;
        return true;
    }
};

}  // namespace

SearchState initial_state(const Model& m) {
    SearchState s;
    s.cfg = initial_config(m);
    return s;
}

int model_remainder(const Model& m, const Configuration& c) {
    return remainder_of(m, c, m.root());
}

int heuristic_value(const Model& m, const Configuration& c, std::size_t remaining_events,
                    Heuristic h) {
    if (h == Heuristic::Zero) return 0;
    int rem = model_remainder(m, c) - (int)remaining_events;
    return rem > 0 ? rem : 0;
}

bool r_test(const Model& m, const MoveSeq& prefix) {
    Configuration c = initial_config(m);
    for (const Move& mv : prefix) {
        std::optional<Configuration> next = element_step(m, c, mv);
        if (!next) return false;
        c = std::move(*next);
    }
    return all_reduction_redexes(m, prefix).empty();
}

std::vector<Successor> successors(const Model& m, const Trace& sigma, const SearchState& s,
                                  SearchStats* stats) {
    std::vector<Successor> out;

    // replay the prefix, keeping the configuration before every move of the
    // trailing skip run: appending a sync must hop-check the whole run
    std::vector<Move> run_moves;
    std::vector<Configuration> run_before;
    GroupWalker base{m, false, Move{}, Configuration{}, Configuration{}};
    if (!s.prefix.empty()) {
        std::size_t run_start = s.prefix.size();
        while (run_start > 0 && s.prefix[run_start - 1].kind == MoveKind::Skip) --run_start;
        Configuration c = initial_config(m);
        for (std::size_t i = 0; i < s.prefix.size(); ++i) {
            if (i >= run_start) {
                run_moves.push_back(s.prefix[i]);
                run_before.push_back(c);
            }
            if (i + 1 == s.prefix.size()) break;  // c stays in front of the last move
            std::optional<Configuration> next = element_step(m, c, s.prefix[i]);
            if (!next) raise(Errc::InternalError, "search prefix does not replay");
            c = std::move(*next);
        }
        base.have_prev = true;
        base.prev = s.prefix.back();
        base.before_prev = std::move(c);
    }
    base.cur = s.cfg;

    std::size_t steps = 0;
    std::vector<SkipPath> paths = enumerate_skip_paths(m, s.cfg, &steps);
    if (stats) stats->skip_path_steps += steps;

    auto emit = [&](MoveSeq&& appended, std::size_t consumed, Configuration&& cfg) {
        SearchState ns;
        ns.prefix = s.prefix;
        ns.prefix.insert(ns.prefix.end(), appended.begin(), appended.end());
        ns.consumed = consumed;
        ns.g = s.g + total_cost(m, appended);
        ns.cfg = std::move(cfg);
        out.push_back(Successor{std::move(appended), std::move(ns)});
    };

    // T1: pure skip continuations
    for (const SkipPath& p : paths) {
        if (p.skips.empty()) continue;
        GroupWalker w = base;
        bool ok = true;
        for (BlockId b : p.skips)
            if (!w.advance(Move::skip(b))) { ok = false; break; }
        if (!ok) continue;
        MoveSeq appended;
        appended.reserve(p.skips.size());
        for (BlockId b : p.skips) appended.push_back(Move::skip(b));
        emit(std::move(appended), s.consumed, Configuration(p.result));
    }

    // T2: enabling skip path + synchronous move on the next event
    if (s.consumed < sigma.size()) {
        const std::string& head = sigma[s.consumed];
        for (const SkipPath& p : paths) {
            GroupWalker after_skips = base;
            std::vector<Move> run = run_moves;
            std::vector<Configuration> before = run_before;
            bool ok = true;
            for (BlockId b : p.skips) {
                run.push_back(Move::skip(b));
                before.push_back(after_skips.cur);
                if (!after_skips.advance(Move::skip(b))) { ok = false; break; }
            }
            if (!ok) continue;
            for (const auto& [leaf, label] : enabled_sync_leaves(m, p.result)) {
                if (label != head) continue;
                Move sync_mv = Move::sync(label, leaf);
                GroupWalker w = after_skips;
                if (!w.advance(sync_mv)) continue;
                if (sync_hop_reduces(m, run, before, sync_mv)) continue;
                MoveSeq appended;
                appended.reserve(p.skips.size() + 1);
                for (BlockId b : p.skips) appended.push_back(Move::skip(b));
                appended.push_back(sync_mv);
                emit(std::move(appended), s.consumed + 1, std::move(w.cur));
            }
        }

        // T3: log move, never directly after a skip (that pair would reduce)
        if (s.prefix.empty() || s.prefix.back().kind != MoveKind::Skip) {
            MoveSeq appended{Move::log(head)};
            emit(std::move(appended), s.consumed + 1, Configuration(s.cfg));
        }
    }
    return out;
}

namespace {

struct QueueEntry {
    int f = 0;
    std::size_t remaining = 0;
    std::uint64_t order = 0;
    std::size_t idx = 0;  // into the state arena
    bool operator>(const QueueEntry& o) const {
        if (f != o.f) return f > o.f;
        if (remaining != o.remaining) return remaining > o.remaining;
        return order > o.order;
    }
};

struct BestFirst {
    const Model& m;
    const Trace& sigma;
    Heuristic h;
    const SearchLimits& limits;
    SearchStats& stats;

    std::vector<SearchState> arena;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> open;
    std::set<MoveSeq> visited;
    std::uint64_t order = 0;

    void push(SearchState&& s) {
        if (visited.count(s.prefix)) return;
        int f = s.g + heuristic_value(m, s.cfg, sigma.size() - s.consumed, h);
        std::size_t remaining = sigma.size() - s.consumed;
        arena.push_back(std::move(s));
        open.push(QueueEntry{f, remaining, order++, arena.size() - 1});
        ++stats.pushed;
    }

    // returns C*
    int run() {
        push(initial_state(m));
        while (!open.empty()) {
            QueueEntry top = open.top();
            open.pop();
            SearchState s = std::move(arena[top.idx]);
            if (!visited.insert(s.prefix).second) continue;
            if (++stats.expanded_phase1 > limits.max_states)
                raise(Errc::MaxStatesExceeded, "state budget exhausted in cost search");
            if (is_goal(m, sigma, s)) return s.g;
            for (Successor& suc : successors(m, sigma, s, &stats))
                push(std::move(suc.state));
        }
        raise(Errc::NoExecution, "no complete execution found");
    }
};

struct Collector {
    const Model& m;
    const Trace& sigma;
    Heuristic h;
    const SearchLimits& limits;
    SearchStats& stats;
    int cstar;

    std::set<MoveSeq> expanded;
    std::set<MoveSeq> goals;

    void visit(const SearchState& s) {
        if (s.g + heuristic_value(m, s.cfg, sigma.size() - s.consumed, h) > cstar) return;
        if (!expanded.insert(s.prefix).second) return;
        if (++stats.expanded_phase2 > limits.max_states - stats.expanded_phase1)
            raise(Errc::MaxStatesExceeded, "state budget exhausted in enumeration");
        if (is_goal(m, sigma, s) && s.g == cstar) goals.insert(s.prefix);
        for (Successor& suc : successors(m, sigma, s, &stats)) visit(suc.state);
    }
};

}  // namespace

int optimal_cost(const Model& m, const Trace& sigma, Heuristic h, const SearchLimits& limits,
                 SearchStats* stats) {
    SearchStats local;
    SearchStats& st = stats ? *stats : local;
    BestFirst search{m, sigma, h, limits, st, {}, {}, {}, 0};
    return search.run();
}

AllOptimalResult enumerate_all_optimal(const Model& m, const Trace& sigma, Heuristic h,
                                       const SearchLimits& limits) {
    AllOptimalResult res;
    res.optimal_cost = optimal_cost(m, sigma, h, limits, &res.stats);
    Collector collector{m, sigma, h, limits, res.stats, res.optimal_cost, {}, {}};
    collector.visit(initial_state(m));
    res.alignments.reserve(collector.goals.size());
    for (const MoveSeq& g : collector.goals) res.alignments.push_back(SkipAlignment{g});
    return res;
}

}  // namespace skipalign
