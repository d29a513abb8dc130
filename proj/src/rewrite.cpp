#include "skipalign/rewrite.hpp"

#include <algorithm>
#include <utility>

#include "skipalign/errors.hpp"
#include "skipalign/semantics.hpp"

namespace skipalign {

namespace {

// Fires one move onto c under strict replay; log moves leave the model alone.
bool strict_step(const Model& m, Configuration& c, const Move& mv) {
    std::optional<Configuration> next;
    switch (mv.kind) {
    case MoveKind::Log:
        return true;
    case MoveKind::Sync: {
        if (mv.block >= m.size()) return false;
        const Block& b = m.block(mv.block);
        if (b.kind != BlockKind::Activity || b.label != mv.label) return false;
        next = try_apply_sync(m, c, mv.block, Replay::Strict);
        break;
    }
    case MoveKind::Skip:
        next = try_apply_skip(m, c, mv.block, Replay::Strict);
        break;
    default:
        return false;  // model moves are eliminated before reduction applies
    }
    if (!next) return false;
    c = std::move(*next);
    return true;
}

Rule lift_rule(BlockKind k) {
    switch (k) {
    case BlockKind::Seq: return Rule::L1;
    case BlockKind::Xor: return Rule::L2;
    case BlockKind::And: return Rule::L3;
    case BlockKind::Loop: return Rule::L4;
    default: raise(Errc::InternalError, "lift target must be an interior block");
    }
}

// Classifies an already validated reduction pair.
Rule classify_reduction(const Move& a, const Move& b) {
    (void)a;
    switch (b.kind) {
    case MoveKind::Log: return Rule::R1;
    case MoveKind::Sync: return Rule::R2;
    default: return Rule::R3;
    }
}

// Sum over moves of 1 + depth(block); log moves count zero. Every C/L step
// strictly decreases this, which bounds the transformation fixpoint.
long long depth_weight(const Model& m, const MoveSeq& moves) {
    long long w = 0;
    for (const Move& mv : moves)
        if (mv.kind != MoveKind::Log) w += 1 + (long long)m.block(mv.block).depth;
    return w;
}

}  // namespace

const char* rule_name(Rule r) {
    switch (r) {
    case Rule::L1: return "L1";
    case Rule::L2: return "L2";
    case Rule::L3: return "L3";
    case Rule::L4: return "L4";
    case Rule::C1: return "C1";
    case Rule::C2: return "C2";
    case Rule::R1: return "R1";
    case Rule::R2: return "R2";
    case Rule::R3: return "R3";
    }
    return "?";
}

MixAlignment to_mix_alignment(const Model& m, const Alignment& gamma) {
    if (!moves_well_formed(m, gamma.moves))
        raise(Errc::InvalidAlignment, "malformed moves in classical alignment");
    std::vector<BlockId> firings;
    for (const Move& mv : gamma.moves) {
        if (mv.kind == MoveKind::Skip)
            raise(Errc::InvalidAlignment, "classical alignment may not contain skip moves");
        if (mv.kind != MoveKind::Log) firings.push_back(mv.block);
    }
    if (!replays_to_final(m, firings))
        raise(Errc::InvalidAlignment, "model projection is not a complete execution");
    MixAlignment mix;
    mix.moves.reserve(gamma.moves.size());
    for (const Move& mv : gamma.moves)
        mix.moves.push_back(mv.kind == MoveKind::Model ? Move::skip(mv.block) : mv);
    return mix;
}

std::vector<Redex> all_transformation_redexes(const Model& m, const MoveSeq& moves) {
    std::optional<ExecutionForest> forest = parse_execution(m, moves);
    if (!forest)
        raise(Errc::InvalidAlignment, "model projection does not replay");
    std::vector<Redex> out;
    const auto& ns = forest->nodes;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const InstanceNode& n = ns[i];
        if (n.is_element) continue;
        const Block& blk = m.block(n.block);
        if (blk.kind == BlockKind::Loop) {
            // a pure-skip iteration is an adjacent (redo, do) pair of
            // completed all-skip child instances
            for (std::size_t k = 0; k + 1 < n.kids.size(); ++k) {
                const InstanceNode& r = ns[(std::size_t)n.kids[k]];
                const InstanceNode& d = ns[(std::size_t)n.kids[k + 1]];
                if (r.block == blk.children[1] && d.block == blk.children[0] &&
                    r.complete && d.complete && r.all_skip && d.all_skip) {
                    Redex rx;
                    rx.rule = Rule::C1;
                    forest->collect_positions(n.kids[k], rx.positions);
                    forest->collect_positions(n.kids[k + 1], rx.positions);
                    std::sort(rx.positions.begin(), rx.positions.end());
                    out.push_back(std::move(rx));
                }
            }
        }
        if (n.complete && n.all_skip) {
            Redex rx;
            rx.rule = lift_rule(blk.kind);
            rx.target = n.block;
            forest->collect_positions((int)i, rx.positions);
            std::sort(rx.positions.begin(), rx.positions.end());
            out.push_back(std::move(rx));
        }
    }
    return out;
}

std::optional<Redex> find_transformation_redex(const Model& m, const MixAlignment& mix) {
    std::vector<Redex> all = all_transformation_redexes(m, mix.moves);
    const Redex* best = nullptr;
    // pure-skip iterations first, latest one first (inner before outer when nested)
    for (const Redex& rx : all) {
        if (rx.rule != Rule::C1) continue;
        if (!best || std::make_pair(rx.positions.back(), rx.positions.front()) >
                         std::make_pair(best->positions.back(), best->positions.front()))
            best = &rx;
    }
    if (best) return *best;
    // then lifts, innermost first, leftmost on equal depth
    std::uint32_t best_depth = 0;
    for (const Redex& rx : all) {
        if (rx.rule == Rule::C1) continue;
        std::uint32_t d = m.block(rx.target).depth;
        if (!best || d > best_depth ||
            (d == best_depth && rx.positions.front() < best->positions.front())) {
            best = &rx;
            best_depth = d;
        }
    }
    if (best) return *best;
    return std::nullopt;
}

bool reduction_pair(const Model& m, const Configuration& before, const Move& a, const Move& b) {
    if (a.kind != MoveKind::Skip) return false;
    if (b.kind == MoveKind::Log) return true;
    if (b.kind == MoveKind::Model) return false;
    if (b.kind == MoveKind::Skip && !block_order_lt(b.block, a.block)) return false;
    Configuration c = before;
    return strict_step(m, c, b) && strict_step(m, c, a);
}

bool reduction_hop(const Model& m, const MoveSeq& d, std::size_t i, std::size_t j) {
    if (j >= d.size() || i >= j) return false;
    if (d[i].kind != MoveKind::Skip) return false;
    if (d[j].kind != MoveKind::Log && d[j].kind != MoveKind::Sync) return false;
    Configuration c = initial_config(m);
    for (std::size_t k = 0; k <= j; ++k) {
        if (k == i) continue;
        if (!strict_step(m, c, d[k])) return false;
    }
    return strict_step(m, c, d[i]);
}

std::vector<Redex> all_reduction_redexes(const Model& m, const MoveSeq& d) {
    std::vector<Redex> out;
    Configuration c = initial_config(m);  // configuration before position i
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i].kind == MoveKind::Skip) {
            for (std::size_t j = i + 1; j < d.size(); ++j) {
                if (j == i + 1 && d[j].kind == MoveKind::Skip &&
                    reduction_pair(m, c, d[i], d[j])) {
                    out.push_back(Redex{Rule::R3, {i, j}, kNoBlock});
                    continue;
                }
                if ((d[j].kind == MoveKind::Log || d[j].kind == MoveKind::Sync) &&
                    reduction_hop(m, d, i, j))
                    out.push_back(Redex{classify_reduction(d[i], d[j]), {i, j}, kNoBlock});
            }
        }
        if (!strict_step(m, c, d[i])) break;  // nothing past a replay failure
    }
    return out;
}

std::optional<Redex> find_reduction_redex(const Model& m, const MoveSeq& d) {
    Configuration c = initial_config(m);
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i].kind == MoveKind::Skip) {
            for (std::size_t j = i + 1; j < d.size(); ++j) {
                if (j == i + 1 && d[j].kind == MoveKind::Skip &&
                    reduction_pair(m, c, d[i], d[j]))
                    return Redex{Rule::R3, {i, j}, kNoBlock};
                if ((d[j].kind == MoveKind::Log || d[j].kind == MoveKind::Sync) &&
                    reduction_hop(m, d, i, j))
                    return Redex{classify_reduction(d[i], d[j]), {i, j}, kNoBlock};
            }
        }
        if (!strict_step(m, c, d[i])) break;
    }
    return std::nullopt;
}

MoveSeq apply_rule(const Model& m, const MoveSeq& d, const Redex& rx) {
    if (rx.positions.empty())
        raise(Errc::StaleRedex, "redex has no positions");
    for (std::size_t p : rx.positions)
        if (p >= d.size()) raise(Errc::StaleRedex, "redex position past the end");
    if (!std::is_sorted(rx.positions.begin(), rx.positions.end()))
        raise(Errc::StaleRedex, "redex positions out of order");

    switch (rx.rule) {
    case Rule::R1:
    case Rule::R2: {
        if (rx.positions.size() != 2)
            raise(Errc::StaleRedex, "hop redex must name exactly two positions");
        std::size_t i = rx.positions[0], j = rx.positions[1];
        if (classify_reduction(d[i], d[j]) != rx.rule || !reduction_hop(m, d, i, j))
            raise(Errc::StaleRedex, "pair is not a reduction redex any more");
        MoveSeq out = d;
        Move mv = out[i];
        out.erase(out.begin() + (std::ptrdiff_t)i);
        out.insert(out.begin() + (std::ptrdiff_t)j, mv);  // lands just after d[j]
        return out;
    }
    case Rule::R3: {
        if (rx.positions.size() != 2 || rx.positions[1] != rx.positions[0] + 1)
            raise(Errc::StaleRedex, "sorting redex must name an adjacent pair");
        std::size_t i = rx.positions[0];
        Configuration c = initial_config(m);
        for (std::size_t k = 0; k < i; ++k)
            if (!strict_step(m, c, d[k]))
                raise(Errc::StaleRedex, "prefix before the redex does not replay");
        if (d[i + 1].kind != MoveKind::Skip || !reduction_pair(m, c, d[i], d[i + 1]))
            raise(Errc::StaleRedex, "pair is not a reduction redex any more");
        MoveSeq out = d;
        std::swap(out[i], out[i + 1]);
        return out;
    }
    case Rule::C1:
    case Rule::L1:
    case Rule::L2:
    case Rule::L3:
    case Rule::L4: {
        std::vector<Redex> all = all_transformation_redexes(m, d);
        if (std::find(all.begin(), all.end(), rx) == all.end())
            raise(Errc::StaleRedex, "transformation redex no longer applies");
        MoveSeq out = d;
        if (rx.rule == Rule::C1) {
            for (auto it = rx.positions.rbegin(); it != rx.positions.rend(); ++it)
                out.erase(out.begin() + (std::ptrdiff_t)*it);
        } else {
            out[rx.positions.front()] = Move::skip(rx.target);
            for (auto it = rx.positions.rbegin(); it != rx.positions.rend() - 1; ++it)
                out.erase(out.begin() + (std::ptrdiff_t)*it);
        }
        return out;
    }
    case Rule::C2:
        raise(Errc::StaleRedex, "rule not produced by this rewriter");
    }
    raise(Errc::InternalError, "unknown rule");
}

SkipAlignment transform_to_skip(const Model& m, const Alignment& gamma) {
    MixAlignment mix = to_mix_alignment(m, gamma);
    MoveSeq cur = std::move(mix.moves);
    long long guard = depth_weight(m, cur) + 1;
    while (true) {
        std::optional<Redex> rx = find_transformation_redex(m, MixAlignment{cur});
        if (!rx) break;
        if (--guard < 0) raise(Errc::InternalError, "transformation did not converge");
        cur = apply_rule(m, cur, *rx);
    }
    if (!in_skip_language(m, project_model(cur)))
        raise(Errc::InternalError, "transformation fixpoint left the skip language");
    return SkipAlignment{std::move(cur)};
}

long long termination_measure(const MoveSeq& d) {
    long long t1 = 0, t2 = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i].kind != MoveKind::Skip) continue;
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            if (d[j].kind == MoveKind::Log || d[j].kind == MoveKind::Sync) ++t1;
            if (d[j].kind == MoveKind::Skip && block_order_lt(d[j].block, d[i].block)) ++t2;
        }
    }
    return ((long long)d.size() + 1) * t1 + t2;
}

SkipAlignment normalize(const Model& m, const SkipAlignment& d) {
    MoveSeq cur = d.moves;
    long long guard = termination_measure(cur) + 1;
    while (std::optional<Redex> rx = find_reduction_redex(m, cur)) {
        if (--guard < 0) raise(Errc::InternalError, "reduction did not terminate");
        cur = apply_rule(m, cur, *rx);
    }
    return SkipAlignment{std::move(cur)};
}

bool is_normal_form(const Model& m, const MoveSeq& d) {
    return !find_reduction_redex(m, d).has_value();
}

}  // namespace skipalign
