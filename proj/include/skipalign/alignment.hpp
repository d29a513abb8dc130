#ifndef SKIPALIGN_ALIGNMENT_HPP
#define SKIPALIGN_ALIGNMENT_HPP

#include <compare>
#include <string>
#include <vector>

#include "skipalign/model.hpp"

namespace skipalign {

using Trace = std::vector<std::string>;

enum class MoveKind : std::uint8_t { Log, Sync, Model, Skip };

struct Move {
    MoveKind kind = MoveKind::Log;
    std::string label;     // Log and Sync
    BlockId block = kNoBlock;  // Sync/Model: leaf id, Skip: any block id

    static Move log(std::string lbl) { return {MoveKind::Log, std::move(lbl), kNoBlock}; }
    static Move sync(std::string lbl, BlockId leaf) { return {MoveKind::Sync, std::move(lbl), leaf}; }
    static Move model(BlockId leaf) { return {MoveKind::Model, {}, leaf}; }
    static Move skip(BlockId b) { return {MoveKind::Skip, {}, b}; }

    auto operator<=>(const Move&) const = default;
};

using MoveSeq = std::vector<Move>;

// Classical alignment: log / sync / model moves.
struct Alignment {
    MoveSeq moves;
    auto operator<=>(const Alignment&) const = default;
};

// Mix alignment: intermediate form where model moves have become leaf skips
// but the model projection need not be maximally general yet.
struct MixAlignment {
    MoveSeq moves;
    auto operator<=>(const MixAlignment&) const = default;
};

// Skip alignment: log / sync / skip moves with the model projection in the
// skip language.
struct SkipAlignment {
    MoveSeq moves;
    auto operator<=>(const SkipAlignment&) const = default;
};

// Unit cost table: log 1, visible model move 1, tau model move 0, sync 0,
// skip(b) = kappa(b).
struct CostFn {
    auto operator<=>(const CostFn&) const = default;
};

int move_cost(const Model& m, const Move& mv, const CostFn& f = {});
int total_cost(const Model& m, const MoveSeq& moves, const CostFn& f = {});

Trace project_log(const MoveSeq& moves);
MoveSeq project_model(const MoveSeq& moves);  // sync / model / skip moves, in order

// Log projection equals sigma, labels/blocks well-formed, and the model
// projection is in the skip language of m.
bool validate_skip_alignment(const Model& m, const Trace& sigma, const SkipAlignment& delta);

// Structural well-formedness shared by validators: sync labels match their
// leaf, model moves name leaves, skip moves name known blocks.
bool moves_well_formed(const Model& m, const MoveSeq& moves);

std::string move_to_string(const Move& mv);
std::string moves_to_string(const MoveSeq& moves);

} // namespace skipalign

#endif
