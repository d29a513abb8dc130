#ifndef SKIPALIGN_TESTS_CORPUS_HPP
#define SKIPALIGN_TESTS_CORPUS_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "skipalign/alignment.hpp"
#include "skipalign/model.hpp"

namespace skipalign::testsupport {

// Deterministic desk-scale instance generator: models of at most max_blocks
// blocks and depth at most max_depth over labels a..e, traces of at most
// max_events events. Every operator appears across any few dozen instances.
struct GenLimits {
    std::size_t max_blocks = 10;
    std::uint32_t max_depth = 3;
    std::size_t max_events = 6;
};

TreeNode random_tree(std::mt19937& rng, const GenLimits& lim);

// Retries until the cheapest execution fits within max_events (keeps the
// brute-force oracle affordable).
Model random_model(std::mt19937& rng, const GenLimits& lim = {});

// A random complete execution's visible labels (perfect fit when within the
// event limit — callers regenerate otherwise).
Trace random_execution_trace(const Model&, std::mt19937& rng, std::size_t length_bias);

// Applies 1..2 random edits: swap, drop, insert, relabel.
Trace mutate_trace(Trace t, std::mt19937& rng, std::size_t max_events);

Trace noise_trace(std::mt19937& rng, std::size_t max_events);

struct Instance {
    Model model;
    Trace trace;
};

// Deterministic mixed corpus: a fixed hand-picked prefix (the worked examples
// plus nested-loop and parallel shapes), then random instances cycling
// perfect / mutated / noise traces.
std::vector<Instance> corpus(std::size_t count, std::uint32_t seed,
                             const GenLimits& lim = {});

} // namespace skipalign::testsupport

#endif
