#include "skipalign/alignment.hpp"

#include "skipalign/semantics.hpp"

namespace skipalign {

int move_cost(const Model& m, const Move& mv, const CostFn&) {
    switch (mv.kind) {
        case MoveKind::Log: return 1;
        case MoveKind::Sync: return 0;
        case MoveKind::Model: return m.block(mv.block).kind == BlockKind::Tau ? 0 : 1;
        case MoveKind::Skip: return m.block(mv.block).kappa;
    }
    return 0;
}

int total_cost(const Model& m, const MoveSeq& moves, const CostFn& f) {
    int s = 0;
    for (const auto& mv : moves) s += move_cost(m, mv, f);
    return s;
}

Trace project_log(const MoveSeq& moves) {
    Trace t;
    for (const auto& mv : moves)
        if (mv.kind == MoveKind::Log || mv.kind == MoveKind::Sync) t.push_back(mv.label);
    return t;
}

MoveSeq project_model(const MoveSeq& moves) {
    MoveSeq out;
    for (const auto& mv : moves)
        if (mv.kind != MoveKind::Log) out.push_back(mv);
    return out;
}

bool moves_well_formed(const Model& m, const MoveSeq& moves) {
    for (const auto& mv : moves) {
        switch (mv.kind) {
            case MoveKind::Log:
                if (mv.label.empty()) return false;
                break;
            case MoveKind::Sync: {
                if (mv.block >= m.size()) return false;
                const Block& b = m.block(mv.block);
                if (b.kind != BlockKind::Activity || b.label != mv.label) return false;
                break;
            }
            case MoveKind::Model: {
                if (mv.block >= m.size()) return false;
                if (!m.block(mv.block).is_leaf()) return false;
                break;
            }
            case MoveKind::Skip:
                if (mv.block >= m.size()) return false;
                break;
        }
    }
    return true;
}

bool validate_skip_alignment(const Model& m, const Trace& sigma, const SkipAlignment& delta) {
    for (const auto& mv : delta.moves)
        if (mv.kind == MoveKind::Model) return false;
    if (!moves_well_formed(m, delta.moves)) return false;
    if (project_log(delta.moves) != sigma) return false;
    return in_skip_language(m, project_model(delta.moves));
}

std::string move_to_string(const Move& mv) {
    switch (mv.kind) {
        case MoveKind::Log: return "log(" + mv.label + ")";
        case MoveKind::Sync: return "sync(" + mv.label + ",B" + std::to_string(mv.block) + ")";
        case MoveKind::Model: return "model(B" + std::to_string(mv.block) + ")";
        case MoveKind::Skip: return "skip(B" + std::to_string(mv.block) + ")";
    }
    return "?";
}

std::string moves_to_string(const MoveSeq& moves) {
    std::string s = "<";
    for (std::size_t i = 0; i < moves.size(); ++i) {
        if (i) s += ", ";
        s += move_to_string(moves[i]);
    }
    s += ">";
    return s;
}

} // namespace skipalign
