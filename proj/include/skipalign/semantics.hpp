#ifndef SKIPALIGN_SEMANTICS_HPP
#define SKIPALIGN_SEMANTICS_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "skipalign/alignment.hpp"
#include "skipalign/model.hpp"

namespace skipalign {

enum class Status : std::uint8_t { Future, Active, Done };
enum class LoopPhase : std::uint8_t { None, InDo, AfterDo, InRedo };

// Per-block execution state. Loops complete lazily (the exit choice is taken
// when an outside move, or finalization, needs them closed); everything else
// completes eagerly when its children do.
//
// content_all_skip tracks whether the current instance has received only skip
// elements so far; prev_redo_all_skip remembers whether the most recently
// completed redo part was all-skip. Together they let strict replay reject,
// at the moment a block instance completes, executions that are not maximally
// general (an instance wholly made of skips must be a single skip of the block
// itself) and pure-skip loop iterations (an all-skip redo followed by an
// all-skip do).
struct BlockState {
    Status status = Status::Future;
    LoopPhase phase = LoopPhase::None;
    std::uint16_t cursor = 0;        // seq: first non-done child index
    std::int32_t chosen = -1;        // xor: committed child index
    bool content_all_skip = true;
    bool prev_redo_all_skip = false;
    auto operator<=>(const BlockState&) const = default;
};

struct Configuration {
    std::vector<BlockState> states;
    auto operator<=>(const Configuration&) const = default;
    const BlockState& at(BlockId b) const { return states[b]; }
};

enum class Replay : std::uint8_t { Strict, Lenient };

Configuration initial_config(const Model& m);

// Non-throwing single-step appliers; nullopt when the move is not possible
// from c (including, in strict mode, moves that would complete an instance
// outside the skip language).
std::optional<Configuration> try_apply_sync(const Model&, const Configuration&, BlockId leaf,
                                            Replay mode = Replay::Strict);
std::optional<Configuration> try_apply_model(const Model&, const Configuration&, BlockId leaf);
std::optional<Configuration> try_apply_skip(const Model&, const Configuration&, BlockId b,
                                            Replay mode = Replay::Strict);
std::optional<Configuration> try_finalize(const Model&, const Configuration&,
                                          Replay mode = Replay::Strict);

Configuration apply_sync(const Model&, const Configuration&, BlockId leaf);  // NotEnabled
Configuration apply_skip(const Model&, const Configuration&, BlockId b);     // NotSkippable

// True iff the execution can end here: the root is done, or becomes done by
// closing the pending after-do loop chain (with the strict completion checks).
bool is_final(const Model&, const Configuration&);

// Visible leaves fireable as a synchronous move right now, with their labels.
std::vector<std::pair<BlockId, std::string>> enabled_sync_leaves(const Model&,
                                                                 const Configuration&);

// All leaves fireable as classical model moves (lenient; includes tau leaves).
std::vector<BlockId> enabled_leaves(const Model&, const Configuration&);

struct SkipPath {
    std::vector<BlockId> skips;
    Configuration result;
};

// Every pure-skip continuation from c, the empty path included, that stays
// inside the skip language: no instance completes all-skip unless it is a
// single skip element, and no pure-skip loop iteration completes. steps, when
// given, accumulates the number of enumeration visits.
std::vector<SkipPath> enumerate_skip_paths(const Model&, const Configuration&,
                                           std::size_t* steps = nullptr);

// Membership test for model-side sequences (sync and skip moves only):
// replays strictly and reaches a final configuration.
bool in_skip_language(const Model&, const MoveSeq& elements);

// Classical replay: fire the given leaves in order (lenient) and require a
// complete execution of the model.
bool replays_to_final(const Model&, const std::vector<BlockId>& leaf_firings);

// Instance-level parse of the model side of a move sequence (log moves are
// passed over; positions index into `moves`). Built by lenient replay; used
// by the rewriting transformation to locate liftable instance groups and
// pure-skip loop iterations.
struct InstanceNode {
    BlockId block = kNoBlock;
    int parent = -1;
    std::vector<int> kids;          // child instances, in execution order
    std::size_t pos = 0;            // element nodes: position in the move sequence
    bool is_element = false;        // sync element or skip element
    bool direct_skip = false;       // a skip element
    bool all_skip = true;           // no sync element anywhere in this instance
    bool complete = false;
};

struct ExecutionForest {
    std::vector<InstanceNode> nodes;  // nodes[0] is the root instance
    void collect_positions(int node, std::vector<std::size_t>& out) const;
    std::size_t first_position(int node) const;
    std::size_t last_position(int node) const;
};

std::optional<ExecutionForest> parse_execution(const Model&, const MoveSeq& moves);

} // namespace skipalign

#endif
