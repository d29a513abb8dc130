#ifndef SKIPALIGN_SEARCH_HPP
#define SKIPALIGN_SEARCH_HPP

#include <cstdint>
#include <vector>

#include "skipalign/alignment.hpp"
#include "skipalign/model.hpp"
#include "skipalign/semantics.hpp"

namespace skipalign {

enum class Heuristic : std::uint8_t { Zero, ModelRemainder };

struct SearchLimits {
    std::size_t max_states = 1'000'000;  // expansions across both phases
};

struct SearchStats {
    std::size_t expanded_phase1 = 0;  // best-first pops
    std::size_t expanded_phase2 = 0;  // depth-first visits
    std::size_t pushed = 0;
    std::size_t skip_path_steps = 0;  // enumeration work inside successors
    std::size_t states_total() const { return expanded_phase1 + expanded_phase2; }
};

// A reached search node: the partial skip alignment built so far, how many
// trace events it consumed, the configuration its model projection reaches
// (by strict replay), and its accumulated cost.
struct SearchState {
    MoveSeq prefix;
    std::size_t consumed = 0;
    Configuration cfg;
    int g = 0;
};

struct Successor {
    MoveSeq appended;
    SearchState state;
};

SearchState initial_state(const Model&);

// Cheapest pure-model completion cost of the configuration.
int model_remainder(const Model&, const Configuration&);

// max(0, model_remainder - remaining trace events) for ModelRemainder; 0 for
// Zero. Admissible and consistent for the move cost function.
int heuristic_value(const Model&, const Configuration&, std::size_t remaining_events,
                    Heuristic h);

// True iff the prefix strictly replays and contains no reduction redex, i.e.
// it can still grow into a normal form.
bool r_test(const Model&, const MoveSeq& prefix);

// All moves appendable to s while staying reduction-free:
//   T1  every nonempty skip path from the current configuration;
//   T2  every (possibly empty) skip path that enables a leaf whose label
//       matches the next trace event, followed by that synchronous move;
//   T3  a log move on the next trace event, unless the prefix ends in a skip.
// Different successors may concatenate to equal prefixes; the searches
// deduplicate on the prefix sequence.
std::vector<Successor> successors(const Model&, const Trace& sigma, const SearchState& s,
                                  SearchStats* stats = nullptr);

// Phase 1: best-first search for the optimal skip alignment cost.
// Errors: MaxStatesExceeded, NoExecution.
int optimal_cost(const Model&, const Trace& sigma, Heuristic h = Heuristic::ModelRemainder,
                 const SearchLimits& limits = {}, SearchStats* stats = nullptr);

struct AllOptimalResult {
    int optimal_cost = 0;
    std::vector<SkipAlignment> alignments;  // sorted, duplicate-free
    SearchStats stats;
};

// Phase 1 + phase 2: the complete set of optimal skip alignments in normal
// form. Errors: MaxStatesExceeded, NoExecution.
AllOptimalResult enumerate_all_optimal(const Model&, const Trace& sigma,
                                       Heuristic h = Heuristic::ModelRemainder,
                                       const SearchLimits& limits = {});

} // namespace skipalign

#endif
