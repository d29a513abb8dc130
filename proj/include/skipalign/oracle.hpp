#ifndef SKIPALIGN_ORACLE_HPP
#define SKIPALIGN_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "skipalign/alignment.hpp"
#include "skipalign/model.hpp"

namespace skipalign {

// Desk-scale guard rails for the exhaustive baseline. Exhaustion raises
// BudgetExceeded; the oracle never truncates silently.
struct OracleBudget {
    std::size_t max_model_executions = 200'000;  // edge applications, both phases
    std::size_t max_loop_unrollings = 2;         // redo entries per loop on one path
    std::size_t max_alignment_length = 64;       // moves per enumerated alignment
};

// All cost-minimal classical alignments of sigma on m, by uniform-cost search
// over (trace position, configuration) followed by exhaustive collection of
// every optimal path. Deliberately naive; ground truth for tests and verify.
std::vector<Alignment> enumerate_all_optimal_alignments(const Model&, const Trace& sigma,
                                                        const OracleBudget& = {});

// { normalize(transform_to_skip(gamma)) : gamma optimal }, deduplicated and
// sorted. The reference result the search must reproduce exactly.
std::vector<SkipAlignment> coinciding_normal_forms(const Model&, const Trace& sigma,
                                                   const OracleBudget& = {});

// All optimal classical alignments whose transformed normal form equals
// normalize(delta); the preimage of delta's class. delta must be a valid skip
// alignment of its own log projection (InvalidAlignment).
std::vector<Alignment> expand_coinciding(const Model&, const SkipAlignment& delta,
                                         const OracleBudget& = {});

} // namespace skipalign

#endif
