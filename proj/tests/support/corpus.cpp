#include "support/corpus.hpp"

#include <algorithm>

#include "skipalign/io.hpp"
#include "skipalign/search.hpp"
#include "skipalign/semantics.hpp"

namespace skipalign::testsupport {

namespace {

const char* kLabels[] = {"a", "b", "c", "d", "e"};

std::string pick_label(std::mt19937& rng) {
    return kLabels[std::uniform_int_distribution<std::size_t>(0, 4)(rng)];
}

std::size_t count_blocks(const TreeNode& t) {
    std::size_t n = 1;
    for (const TreeNode& c : t.children) n += count_blocks(c);
    return n;
}

TreeNode gen(std::mt19937& rng, std::size_t budget, std::uint32_t depth,
             const GenLimits& lim) {
    bool must_leaf = depth >= lim.max_depth || budget < 3;
    std::uniform_int_distribution<int> dist(0, 99);
    int roll = dist(rng);
    if (must_leaf || roll < 40) {
        if (roll % 10 == 0) return TreeNode::tau();
        return TreeNode::activity(pick_label(rng));
    }
    auto kids = [&](std::size_t lo, std::size_t hi) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
        n = std::min(n, budget - 1);
        std::vector<TreeNode> out;
        std::size_t left = budget - 1;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t share = left / (n - k);
            TreeNode c = gen(rng, std::max<std::size_t>(1, share), depth + 1, lim);
            left -= std::min(left, count_blocks(c));
            out.push_back(std::move(c));
        }
        return out;
    };
    if (roll < 60) return TreeNode::op(BlockKind::Seq, kids(1, 3));
    if (roll < 75) return TreeNode::op(BlockKind::Xor, kids(2, 3));
    if (roll < 88) return TreeNode::op(BlockKind::And, kids(2, 3));
    std::vector<TreeNode> pair;
    pair.push_back(gen(rng, (budget - 1) / 2 + 1, depth + 1, lim));
    pair.push_back(gen(rng, (budget - 1) / 2, depth + 1, lim));
    return TreeNode::op(BlockKind::Loop, std::move(pair));
}

}  // namespace

TreeNode random_tree(std::mt19937& rng, const GenLimits& lim) {
    return gen(rng, lim.max_blocks, 0, lim);
}

Model random_model(std::mt19937& rng, const GenLimits& lim) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        TreeNode t = random_tree(rng, lim);
        if (count_blocks(t) > lim.max_blocks) continue;
        Model m = validate_model(t);
        if ((std::size_t)m.block(m.root()).kappa > lim.max_events) continue;
        return m;
    }
    // the distribution makes this unreachable; fall back to a fixed shape
    return validate_model(parse_tree_text("->(a,b)"));
}

Trace random_execution_trace(const Model& m, std::mt19937& rng, std::size_t length_bias) {
    Trace out;
    Configuration c = initial_config(m);
    for (int steps = 0; steps < 200; ++steps) {
        bool can_stop = try_finalize(m, c, Replay::Lenient).has_value();
        if (can_stop && (out.size() >= length_bias ||
                         std::uniform_int_distribution<int>(0, 2)(rng) == 0))
            break;
        std::vector<BlockId> leaves = enabled_leaves(m, c);
        if (leaves.empty()) break;
        BlockId leaf = can_stop && out.size() >= length_bias
                           ? leaves.front()
                           : leaves[std::uniform_int_distribution<std::size_t>(
                                 0, leaves.size() - 1)(rng)];
        c = *try_apply_model(m, c, leaf);
        if (m.block(leaf).kind == BlockKind::Activity) out.push_back(m.block(leaf).label);
    }
    // drain to completion deterministically
    while (!try_finalize(m, c, Replay::Lenient)) {
        std::vector<BlockId> leaves = enabled_leaves(m, c);
        if (leaves.empty()) break;
        c = *try_apply_model(m, c, leaves.front());
        if (m.block(leaves.front()).kind == BlockKind::Activity)
            out.push_back(m.block(leaves.front()).label);
    }
    return out;
}

Trace mutate_trace(Trace t, std::mt19937& rng, std::size_t max_events) {
    std::size_t edits = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    for (std::size_t e = 0; e < edits; ++e) {
        int op = std::uniform_int_distribution<int>(0, 3)(rng);
        if (t.empty()) op = 2;
        std::size_t i = t.empty() ? 0
                                  : std::uniform_int_distribution<std::size_t>(
                                        0, t.size() - 1)(rng);
        switch (op) {
        case 0: {  // swap
            std::size_t j =
                std::uniform_int_distribution<std::size_t>(0, t.size() - 1)(rng);
            std::swap(t[i], t[j]);
            break;
        }
        case 1:  // drop
            t.erase(t.begin() + (std::ptrdiff_t)i);
            break;
        case 2:  // insert
            if (t.size() < max_events)
                t.insert(t.begin() + (std::ptrdiff_t)i, pick_label(rng));
            break;
        default:  // relabel
            t[i] = pick_label(rng);
            break;
        }
    }
    if (t.size() > max_events) t.resize(max_events);
    return t;
}

Trace noise_trace(std::mt19937& rng, std::size_t max_events) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_events)(rng);
    Trace t;
    t.reserve(n);
    for (std::size_t k = 0; k < n; ++k) t.push_back(pick_label(rng));
    return t;
}

std::vector<Instance> corpus(std::size_t count, std::uint32_t seed, const GenLimits& lim) {
    std::vector<Instance> out;
    auto fixed = [&](const char* tree, Trace trace) {
        out.push_back(Instance{validate_model(parse_tree_text(tree)), std::move(trace)});
    };
    fixed("->(a,X(b,c),d)", {"a", "d"});
    fixed("->(a,X(b,c),d)", {"a", "b", "c", "d"});
    fixed("*(a,b)", {"b"});
    fixed("+(a,b)", {"b", "a"});
    fixed("*(->(a,b),c)", {"a", "b", "c", "a", "b"});
    fixed("*(*(a,b),c)", {"a", "c", "a"});      // nested loop
    fixed("->(+(a,*(b,c)),d)", {"a", "b", "d"});
    fixed("X(tau,->(a,b))", {});
    fixed("->(a,tau,d)", {"a", "d"});
    fixed("+(X(a,b),*(c,tau))", {"c", "b"});

    std::mt19937 rng(seed);
    while (out.size() < count) {
        Model m = random_model(rng, lim);
        Trace t;
        switch (out.size() % 3) {
        case 0: t = random_execution_trace(m, rng, lim.max_events); break;
        case 1:
            t = mutate_trace(random_execution_trace(m, rng, lim.max_events), rng,
                             lim.max_events);
            break;
        default: t = noise_trace(rng, lim.max_events); break;
        }
        if (t.size() > lim.max_events) t.resize(lim.max_events);
        out.push_back(Instance{std::move(m), std::move(t)});
    }
    out.resize(count);
    return out;
}

}  // namespace skipalign::testsupport
