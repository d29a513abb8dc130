#include "skipalign/model.hpp"

#include <algorithm>
#include <limits>

namespace skipalign {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::ArityViolation: return "ArityViolation";
        case Errc::EmptyLabel: return "EmptyLabel";
        case Errc::EmptyTree: return "EmptyTree";
        case Errc::UnknownBlock: return "UnknownBlock";
        case Errc::NotEnabled: return "NotEnabled";
        case Errc::NotSkippable: return "NotSkippable";
        case Errc::InvalidAlignment: return "InvalidAlignment";
        case Errc::StaleRedex: return "StaleRedex";
        case Errc::SyntaxError: return "SyntaxError";
        case Errc::FormatError: return "FormatError";
        case Errc::MissingColumn: return "MissingColumn";
        case Errc::IoError: return "IoError";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::MaxStatesExceeded: return "MaxStatesExceeded";
        case Errc::NoExecution: return "NoExecution";
        case Errc::InternalError: return "InternalError";
    }
    return "Error";
}

namespace {

void check_node(const TreeNode& n) {
    switch (n.kind) {
        case BlockKind::Activity:
            if (n.label.empty()) raise(Errc::EmptyLabel, "activity leaf with empty label");
            if (!n.children.empty()) raise(Errc::ArityViolation, "activity leaf with children");
            break;
        case BlockKind::Tau:
            if (!n.children.empty()) raise(Errc::ArityViolation, "tau leaf with children");
            break;
        case BlockKind::Seq:
        case BlockKind::Xor:
        case BlockKind::And:
            if (n.children.empty())
                raise(Errc::ArityViolation, "operator requires at least one child");
            break;
        case BlockKind::Loop:
            if (n.children.size() != 2)
                raise(Errc::ArityViolation, "loop requires exactly two children, got " +
                                                std::to_string(n.children.size()));
            break;
    }
    if (n.children.size() > 4096) raise(Errc::ArityViolation, "operator arity too large");
    for (const auto& c : n.children) check_node(c);
}

BlockId build(std::vector<Block>& blocks, const TreeNode& n, BlockId parent, std::uint32_t idx,
              std::uint32_t depth) {
    BlockId id = static_cast<BlockId>(blocks.size());
    blocks.push_back(Block{});
    blocks[id].id = id;
    blocks[id].kind = n.kind;
    blocks[id].label = n.label;
    blocks[id].parent = parent;
    blocks[id].index_in_parent = idx;
    blocks[id].depth = depth;
    for (std::uint32_t i = 0; i < n.children.size(); ++i) {
        BlockId c = build(blocks, n.children[i], id, i, depth + 1);
        blocks[id].children.push_back(c);
    }
    blocks[id].subtree_end = static_cast<BlockId>(blocks.size());
    return id;
}

int compute_kappa(std::vector<Block>& blocks, BlockId b) {
    Block& blk = blocks[b];
    switch (blk.kind) {
        case BlockKind::Activity: blk.kappa = 1; break;
        case BlockKind::Tau: blk.kappa = 0; break;
        case BlockKind::Seq:
        case BlockKind::And: {
            int s = 0;
            for (BlockId c : blk.children) s += compute_kappa(blocks, c);
            blk.kappa = s;
            break;
        }
        case BlockKind::Xor: {
            int best = std::numeric_limits<int>::max();
            for (BlockId c : blk.children) best = std::min(best, compute_kappa(blocks, c));
            blk.kappa = best;
            break;
        }
        case BlockKind::Loop: {
            int d = compute_kappa(blocks, blk.children[0]);
            compute_kappa(blocks, blk.children[1]);
            blk.kappa = d;
            break;
        }
    }
    return blk.kappa;
}

} // namespace

Model validate_model(const TreeNode& tree) {
    if (tree.empty_marker) raise(Errc::EmptyTree, "model has no root block");
    check_node(tree);
    Model m;
    m.tree_ = tree;
    build(m.blocks_, tree, kNoBlock, 0, 0);
    compute_kappa(m.blocks_, 0);
    for (const auto& b : m.blocks_) {
        if (b.is_leaf()) {
            m.leaves_.push_back(b.id);
            if (b.kind == BlockKind::Activity) m.by_label_[b.label].push_back(b.id);
        }
    }
    return m;
}

const std::vector<BlockId>& Model::leaves_with_label(const std::string& lbl) const {
    static const std::vector<BlockId> none;
    auto it = by_label_.find(lbl);
    return it == by_label_.end() ? none : it->second;
}

int min_skip_cost(const Model& m, BlockId b) { return m.block(b).kappa; }

} // namespace skipalign
