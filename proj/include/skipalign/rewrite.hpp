#ifndef SKIPALIGN_REWRITE_HPP
#define SKIPALIGN_REWRITE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "skipalign/alignment.hpp"
#include "skipalign/model.hpp"
#include "skipalign/semantics.hpp"

namespace skipalign {

// L1..L4 lift a complete all-skip execution of a seq/xor/and/loop block into a
// single skip of the block; C1 deletes a pure-skip loop iteration; R1..R3
// reorder moves toward the normal form.
enum class Rule : std::uint8_t { L1, L2, L3, L4, C1, C2, R1, R2, R3 };

const char* rule_name(Rule r);

struct Redex {
    Rule rule = Rule::R1;
    std::vector<std::size_t> positions;  // sorted move indices; R1/R2 use {i, j}
                                         // (j > i, not necessarily adjacent),
                                         // R3 uses an adjacent pair {i, i+1}
    BlockId target = kNoBlock;           // L-rules: block the group lifts to
    auto operator<=>(const Redex&) const = default;
};

// Replace every model move by a skip of its leaf. Validates the classical
// alignment (InvalidAlignment).
MixAlignment to_mix_alignment(const Model&, const Alignment&);

// The next C/L redex under the fixed policy: latest pure-skip loop iteration
// first, else the innermost (deepest block, then leftmost) complete all-skip
// instance group. nullopt iff the model projection is in the skip language.
std::optional<Redex> find_transformation_redex(const Model&, const MixAlignment&);

// All currently applicable C/L redexes (used for revalidation and tests).
std::vector<Redex> all_transformation_redexes(const Model&, const MoveSeq&);

// Classical alignment -> skip alignment: to_mix_alignment, then C/L redexes to
// the fixpoint. Never increases cost; preserves the log projection.
SkipAlignment transform_to_skip(const Model&, const Alignment&);

// True iff the adjacent pair (a, b), fired from `before` (the configuration
// reached just before a), reduces:
//   R1  (skip, log) — always;
//   R2  (skip, sync) where the sync does not require the skip, i.e. the
//       swapped pair replays strictly from `before`;
//   R3  (skip b1, skip b2) with b2 < b1 in block order, swapped pair replaying.
bool reduction_pair(const Model&, const Configuration& before, const Move& a, const Move& b);

// R1/R2 in general move a skip to just after a LATER log or sync move, hopping
// over anything in between. reduction_hop answers whether that hop keeps the
// model projection strictly replaying: d[i] must be a skip, d[j] (j > i) a log
// or sync, and d with d[i] deferred to just after d[j] must replay strictly up
// to that point. (The tail beyond j fires the same move set either way.)
bool reduction_hop(const Model&, const MoveSeq& d, std::size_t i, std::size_t j);

// Every applicable reduction redex: R1/R2 hops {i, j} plus adjacent R3 sorting
// swaps {i, i+1}. Ascending by (i, j). Adjacent R3 detection is complete: a
// strictly replaying skip run with no adjacent out-of-order commuting pair is
// sorted outright.
std::vector<Redex> all_reduction_redexes(const Model&, const MoveSeq&);

// Leftmost reduction redex (smallest i, then smallest j), if any.
std::optional<Redex> find_reduction_redex(const Model&, const MoveSeq&);

// Apply a previously found redex; revalidates it first (StaleRedex).
MoveSeq apply_rule(const Model&, const MoveSeq&, const Redex&);

// (|d|+1) * |{(i,j) : i<j, skip at i, log or sync at j}|
//   + |{(i,j) : i<j, both skips, block_j < block_i}|
// Strictly decreases under every R-step.
long long termination_measure(const MoveSeq&);

// Exhaustive leftmost reduction; the result is the unique normal form.
SkipAlignment normalize(const Model&, const SkipAlignment&);

bool is_normal_form(const Model&, const MoveSeq&);
inline bool is_normal_form(const Model& m, const SkipAlignment& d) {
    return is_normal_form(m, d.moves);
}

} // namespace skipalign

#endif
