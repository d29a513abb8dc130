#include "skipalign/semantics.hpp"

#include <algorithm>
#include <cassert>

namespace skipalign {

namespace {

struct Observer {
    virtual ~Observer() = default;
    virtual void on_start(BlockId) {}
    virtual void on_element(BlockId, bool /*is_skip*/) {}
    virtual void on_complete(BlockId) {}
};

class Replayer {
public:
    Replayer(const Model& m, Configuration& c, Replay mode, Observer* obs = nullptr)
        : m_(m), c_(c), strict_(mode == Replay::Strict), obs_(obs) {}

    bool fire_sync(BlockId leaf) { return fire_leaf(leaf, /*allow_tau=*/false); }
    bool fire_model(BlockId leaf) { return fire_leaf(leaf, /*allow_tau=*/true); }

    bool fire_skip(BlockId b) {
        if (b >= m_.size()) return false;
        if (!ensure_path_open(b)) return false;
        const Block& bb = blk(b);
        for (BlockId i = b; i < bb.subtree_end; ++i)
            if (st(i).status != Status::Future) return false;
        for (BlockId i = b; i < bb.subtree_end; ++i) st(i).status = Status::Done;
        st(b).content_all_skip = true;
        if (obs_) obs_->on_element(b, true);
        return bb.parent == kNoBlock || on_child_done(bb.parent, b);
    }

    bool finalize() {
        if (st(0).status == Status::Done) return true;
        if (st(0).status == Status::Future) return false;
        return close_now(0);
    }

private:
    BlockState& st(BlockId b) { return c_.states[b]; }
    const Block& blk(BlockId b) const { return m_.block(b); }

    bool fire_leaf(BlockId leaf, bool allow_tau) {
        if (leaf >= m_.size()) return false;
        const Block& lb = blk(leaf);
        if (lb.kind != BlockKind::Activity && !(allow_tau && lb.kind == BlockKind::Tau))
            return false;
        if (!ensure_path_open(leaf)) return false;
        BlockState& s = st(leaf);
        if (s.status != Status::Future) return false;
        s.status = Status::Done;
        s.content_all_skip = false;
        for (BlockId a = lb.parent; a != kNoBlock; a = blk(a).parent)
            st(a).content_all_skip = false;
        if (obs_) obs_->on_element(leaf, false);
        return lb.parent == kNoBlock || on_child_done(lb.parent, leaf);
    }

    void start_block(BlockId b) {
        BlockState& s = st(b);
        s.status = Status::Active;
        s.cursor = 0;
        s.chosen = -1;
        s.phase = blk(b).kind == BlockKind::Loop ? LoopPhase::InDo : LoopPhase::None;
        s.content_all_skip = true;
        s.prev_redo_all_skip = false;
        if (obs_) obs_->on_start(b);
    }

    void reset_subtree(BlockId b) {
        BlockId end = blk(b).subtree_end;
        for (BlockId i = b; i < end; ++i) c_.states[i] = BlockState{};
    }

    bool ensure_path_open(BlockId target) {
        BlockId chain[64];
        std::size_t n = 0;
        for (BlockId b = target; b != kNoBlock; b = blk(b).parent) {
            if (n == 64) return false;
            chain[n++] = b;
        }
        BlockId root = chain[n - 1];
        if (st(root).status == Status::Done) return false;
        if (n == 1) return true;  // target is the root; skips handle their own state
        if (st(root).status == Status::Future) start_block(root);
        for (std::size_t i = n - 1; i > 0; --i)
            if (!ensure_child_ok(chain[i], chain[i - 1], /*start_interior=*/i > 1))
                return false;
        return true;
    }

    bool ensure_child_ok(BlockId parent, BlockId child, bool start_interior) {
        BlockState& ps = st(parent);
        const Block& pb = blk(parent);
        const std::uint32_t k = blk(child).index_in_parent;
        switch (pb.kind) {
            case BlockKind::Seq: {
                if (k < ps.cursor) return false;
                while (st(parent).cursor < k) {
                    std::uint16_t before = st(parent).cursor;
                    if (!close_now(pb.children[before])) return false;
                    if (st(parent).cursor == before) return false;
                }
                break;
            }
            case BlockKind::Xor: {
                if (ps.chosen < 0) ps.chosen = static_cast<std::int32_t>(k);
                else if (static_cast<std::uint32_t>(ps.chosen) != k) return false;
                break;
            }
            case BlockKind::And:
                break;
            case BlockKind::Loop: {
                // entering the other part first lazily closes the current one
                // (a non-leaf part completes only on demand)
                if (ps.phase == LoopPhase::InDo && k == 1 &&
                    st(pb.children[0]).status == Status::Active) {
                    if (!close_now(pb.children[0])) return false;
                }
                if (ps.phase == LoopPhase::InRedo && k == 0 &&
                    st(pb.children[1]).status == Status::Active) {
                    if (!close_now(pb.children[1])) return false;
                }
                switch (st(parent).phase) {
                    case LoopPhase::InDo:
                        if (k != 0) return false;
                        break;
                    case LoopPhase::AfterDo:
                        if (k != 1) return false;
                        reset_subtree(pb.children[1]);
                        st(parent).phase = LoopPhase::InRedo;
                        break;
                    case LoopPhase::InRedo:
                        if (k != 1) return false;
                        break;
                    default:
                        return false;
                }
                break;
            }
            default:
                return false;
        }
        BlockState& cs = st(child);
        if (cs.status == Status::Done) return false;
        if (cs.status == Status::Future && start_interior && !blk(child).is_leaf())
            start_block(child);
        return true;
    }

    // Complete b without further moves. Only loops in the after-do phase may
    // close, cascading through the active chain.
    bool close_now(BlockId b) {
        BlockState& s = st(b);
        if (s.status == Status::Done) return true;
        if (s.status == Status::Future) return false;
        const Block& bb = blk(b);
        switch (bb.kind) {
            case BlockKind::Activity:
            case BlockKind::Tau:
                return false;
            case BlockKind::Seq:
                while (st(b).status == Status::Active) {
                    std::uint16_t before = st(b).cursor;
                    if (!close_now(bb.children[before])) return false;
                    if (st(b).status == Status::Active && st(b).cursor == before) return false;
                }
                return true;
            case BlockKind::Xor:
                return s.chosen >= 0 && close_now(bb.children[s.chosen]);
            case BlockKind::And:
                for (BlockId c : bb.children) {
                    if (st(b).status == Status::Done) break;
                    if (st(c).status != Status::Done && !close_now(c)) return false;
                }
                return st(b).status == Status::Done;
            case BlockKind::Loop:
                while (st(b).status == Status::Active) {
                    switch (st(b).phase) {
                        case LoopPhase::AfterDo:
                            return complete_block(b);
                        case LoopPhase::InDo:
                            if (st(bb.children[0]).status != Status::Active) return false;
                            if (!close_now(bb.children[0])) return false;
                            break;
                        case LoopPhase::InRedo:
                            if (st(bb.children[1]).status != Status::Active) return false;
                            if (!close_now(bb.children[1])) return false;
                            break;
                        default:
                            return false;
                    }
                }
                return true;
        }
        return false;
    }

    // Cascade completion of an interior block; never used for direct skips.
    bool complete_block(BlockId b) {
        BlockState& s = st(b);
        if (strict_ && s.content_all_skip) return false;  // liftable to skip(b)
        s.status = Status::Done;
        if (obs_) obs_->on_complete(b);
        BlockId p = blk(b).parent;
        return p == kNoBlock || on_child_done(p, b);
    }

    bool on_child_done(BlockId parent, BlockId child) {
        BlockState& ps = st(parent);
        const Block& pb = blk(parent);
        switch (pb.kind) {
            case BlockKind::Seq:
                ++ps.cursor;
                if (ps.cursor == pb.children.size()) return complete_block(parent);
                return true;
            case BlockKind::Xor:
                return complete_block(parent);
            case BlockKind::And:
                for (BlockId c : pb.children)
                    if (st(c).status != Status::Done) return true;
                return complete_block(parent);
            case BlockKind::Loop: {
                if (child == pb.children[0]) {
                    if (strict_ && ps.prev_redo_all_skip && st(child).content_all_skip)
                        return false;  // pure-skip loop iteration
                    ps.phase = LoopPhase::AfterDo;
                    return true;
                }
                ps.prev_redo_all_skip = st(child).content_all_skip;
                reset_subtree(pb.children[0]);
                ps.phase = LoopPhase::InDo;
                return true;
            }
            default:
                return false;
        }
    }

    const Model& m_;
    Configuration& c_;
    bool strict_;
    Observer* obs_;
};

class ForestBuilder : public Observer {
public:
    explicit ForestBuilder(const Model& m) : m_(m), open_(m.size(), -1) {}

    void set_pos(std::size_t p) { pos_ = p; }

    void on_start(BlockId b) override {
        int idx = new_node(b);
        nodes_[idx].is_element = false;
        open_[b] = idx;
    }

    void on_element(BlockId b, bool is_skip) override {
        int idx = new_node(b);
        InstanceNode& n = nodes_[idx];
        n.is_element = true;
        n.direct_skip = is_skip;
        n.all_skip = is_skip;
        n.complete = true;
        n.pos = pos_;
        if (!is_skip)
            for (int a = n.parent; a >= 0; a = nodes_[a].parent) nodes_[a].all_skip = false;
    }

    void on_complete(BlockId b) override {
        if (open_[b] >= 0) {
            nodes_[open_[b]].complete = true;
            open_[b] = -1;
        }
    }

    ExecutionForest take() { return ExecutionForest{std::move(nodes_)}; }

private:
    int new_node(BlockId b) {
        InstanceNode n;
        n.block = b;
        BlockId p = m_.block(b).parent;
        n.parent = p == kNoBlock ? -1 : open_[p];
        int idx = static_cast<int>(nodes_.size());
        if (n.parent >= 0) nodes_[n.parent].kids.push_back(idx);
        nodes_.push_back(std::move(n));
        return idx;
    }

    const Model& m_;
    std::vector<int> open_;
    std::vector<InstanceNode> nodes_;
    std::size_t pos_ = 0;
};

bool replay_element(Replayer& r, const Move& mv) {
    switch (mv.kind) {
        case MoveKind::Log: return true;
        case MoveKind::Sync: return r.fire_sync(mv.block);
        case MoveKind::Model: return r.fire_model(mv.block);
        case MoveKind::Skip: return r.fire_skip(mv.block);
    }
    return false;
}

} // namespace

Configuration initial_config(const Model& m) {
    Configuration c;
    c.states.resize(m.size());
    return c;
}

std::optional<Configuration> try_apply_sync(const Model& m, const Configuration& c, BlockId leaf,
                                            Replay mode) {
    Configuration next = c;
    Replayer r(m, next, mode);
    if (!r.fire_sync(leaf)) return std::nullopt;
    return next;
}

std::optional<Configuration> try_apply_model(const Model& m, const Configuration& c, BlockId leaf) {
    Configuration next = c;
    Replayer r(m, next, Replay::Lenient);
    if (!r.fire_model(leaf)) return std::nullopt;
    return next;
}

std::optional<Configuration> try_apply_skip(const Model& m, const Configuration& c, BlockId b,
                                            Replay mode) {
    Configuration next = c;
    Replayer r(m, next, mode);
    if (!r.fire_skip(b)) return std::nullopt;
    return next;
}

std::optional<Configuration> try_finalize(const Model& m, const Configuration& c, Replay mode) {
    Configuration next = c;
    Replayer r(m, next, mode);
    if (!r.finalize()) return std::nullopt;
    return next;
}

Configuration apply_sync(const Model& m, const Configuration& c, BlockId leaf) {
    auto next = try_apply_sync(m, c, leaf);
    if (!next) {
        const char* why = leaf < m.size() && m.block(leaf).kind != BlockKind::Activity
                              ? " (not a visible leaf)"
                              : "";
        raise(Errc::NotEnabled, "cannot fire B" + std::to_string(leaf) + why);
    }
    return *std::move(next);
}

Configuration apply_skip(const Model& m, const Configuration& c, BlockId b) {
    auto next = try_apply_skip(m, c, b);
    if (!next) raise(Errc::NotSkippable, "cannot skip B" + std::to_string(b));
    return *std::move(next);
}

bool is_final(const Model& m, const Configuration& c) {
    return try_finalize(m, c).has_value();
}

std::vector<std::pair<BlockId, std::string>> enabled_sync_leaves(const Model& m,
                                                                 const Configuration& c) {
    std::vector<std::pair<BlockId, std::string>> out;
    for (BlockId l : m.leaves()) {
        const Block& b = m.block(l);
        if (b.kind != BlockKind::Activity) continue;
        if (try_apply_sync(m, c, l)) out.emplace_back(l, b.label);
    }
    return out;
}

std::vector<BlockId> enabled_leaves(const Model& m, const Configuration& c) {
    std::vector<BlockId> out;
    for (BlockId l : m.leaves())
        if (try_apply_model(m, c, l)) out.push_back(l);
    return out;
}

namespace {

void enum_paths_rec(const Model& m, const Configuration& c, std::vector<BlockId>& path,
                    std::vector<SkipPath>& out, std::size_t* steps) {
    if (steps) ++*steps;
    out.push_back(SkipPath{path, c});
    for (BlockId b = 0; b < m.size(); ++b) {
        if (auto next = try_apply_skip(m, c, b)) {
            path.push_back(b);
            enum_paths_rec(m, *next, path, out, steps);
            path.pop_back();
        }
    }
}

} // namespace

std::vector<SkipPath> enumerate_skip_paths(const Model& m, const Configuration& c,
                                           std::size_t* steps) {
    std::vector<SkipPath> out;
    std::vector<BlockId> path;
    enum_paths_rec(m, c, path, out, steps);
    return out;
}

bool in_skip_language(const Model& m, const MoveSeq& elements) {
    Configuration c = initial_config(m);
    Replayer r(m, c, Replay::Strict);
    for (const Move& mv : elements) {
        if (mv.kind == MoveKind::Sync) {
            if (mv.block >= m.size()) return false;
            const Block& b = m.block(mv.block);
            if (b.kind != BlockKind::Activity || b.label != mv.label) return false;
            if (!r.fire_sync(mv.block)) return false;
        } else if (mv.kind == MoveKind::Skip) {
            if (!r.fire_skip(mv.block)) return false;
        } else {
            return false;
        }
    }
    return r.finalize();
}

bool replays_to_final(const Model& m, const std::vector<BlockId>& leaf_firings) {
    Configuration c = initial_config(m);
    Replayer r(m, c, Replay::Lenient);
    for (BlockId l : leaf_firings)
        if (!r.fire_model(l)) return false;
    return r.finalize();
}

void ExecutionForest::collect_positions(int node, std::vector<std::size_t>& out) const {
    const InstanceNode& n = nodes[node];
    if (n.is_element) out.push_back(n.pos);
    for (int k : n.kids) collect_positions(k, out);
}

std::size_t ExecutionForest::first_position(int node) const {
    const InstanceNode& n = nodes[node];
    if (n.is_element) return n.pos;
    return first_position(n.kids.front());
}

std::size_t ExecutionForest::last_position(int node) const {
    const InstanceNode& n = nodes[node];
    if (n.is_element) return n.pos;
    return last_position(n.kids.back());
}

std::optional<ExecutionForest> parse_execution(const Model& m, const MoveSeq& moves) {
    Configuration c = initial_config(m);
    ForestBuilder fb(m);
    Replayer r(m, c, Replay::Lenient, &fb);
    for (std::size_t i = 0; i < moves.size(); ++i) {
        if (moves[i].kind == MoveKind::Log) continue;
        fb.set_pos(i);
        if (!replay_element(r, moves[i])) return std::nullopt;
    }
    if (!r.finalize()) return std::nullopt;
    return fb.take();
}

} // namespace skipalign
