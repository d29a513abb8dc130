#ifndef SKIPALIGN_MODEL_HPP
#define SKIPALIGN_MODEL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "skipalign/errors.hpp"

namespace skipalign {

enum class BlockKind : std::uint8_t { Activity, Tau, Seq, Xor, And, Loop };

using BlockId = std::uint32_t;
inline constexpr BlockId kNoBlock = static_cast<BlockId>(-1);

// Parse-level tree; validate_model turns it into an indexed Model.
struct TreeNode {
    BlockKind kind = BlockKind::Tau;
    std::string label;                // Activity only
    std::vector<TreeNode> children;
    bool empty_marker = false;        // stands for "no tree at all"

    static TreeNode activity(std::string lbl) {
        TreeNode n;
        n.kind = BlockKind::Activity;
        n.label = std::move(lbl);
        return n;
    }
    static TreeNode tau() { return TreeNode{}; }
    static TreeNode op(BlockKind k, std::vector<TreeNode> kids) {
        TreeNode n;
        n.kind = k;
        n.children = std::move(kids);
        return n;
    }
    static TreeNode empty() {
        TreeNode n;
        n.empty_marker = true;
        return n;
    }

    bool operator==(const TreeNode& o) const {
        return empty_marker == o.empty_marker && kind == o.kind && label == o.label &&
               children == o.children;
    }
};

struct Block {
    BlockId id = 0;                 // preorder index; doubles as the total block order
    BlockKind kind = BlockKind::Tau;
    std::string label;
    BlockId parent = kNoBlock;
    std::uint32_t index_in_parent = 0;
    std::vector<BlockId> children;
    std::uint32_t depth = 0;        // root = 0
    BlockId subtree_end = 0;        // one past the last preorder id in this subtree
    int kappa = 0;                  // cheapest pure-model execution cost

    bool is_leaf() const { return kind == BlockKind::Activity || kind == BlockKind::Tau; }
};

class Model {
public:
    BlockId root() const { return 0; }
    std::size_t size() const { return blocks_.size(); }
    const Block& block(BlockId b) const {
        if (b >= blocks_.size()) raise(Errc::UnknownBlock, "block id B" + std::to_string(b));
        return blocks_[b];
    }
    const std::vector<Block>& blocks() const { return blocks_; }
    const std::vector<BlockId>& leaves() const { return leaves_; }
    const std::vector<BlockId>& leaves_with_label(const std::string& lbl) const;
    const TreeNode& tree() const { return tree_; }

    bool in_subtree(BlockId inner, BlockId outer) const {
        return inner >= outer && inner < blocks_[outer].subtree_end;
    }

private:
    friend Model validate_model(const TreeNode&);
    std::vector<Block> blocks_;
    std::vector<BlockId> leaves_;
    std::map<std::string, std::vector<BlockId>> by_label_;
    TreeNode tree_;
};

// Checks arities and labels, assigns preorder ids, computes depths, subtree
// ranges and minimal skip costs.
Model validate_model(const TreeNode& tree);

// kappa: activity 1, tau 0, seq/and sum, xor min, loop cost of its do-child.
int min_skip_cost(const Model& m, BlockId b);

// Total order used by the rewriting system: preorder position.
inline bool block_order_lt(BlockId a, BlockId b) { return a < b; }

} // namespace skipalign

#endif
