#include "skipalign/cli.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "skipalign/errors.hpp"
#include "skipalign/io.hpp"
#include "skipalign/search.hpp"

namespace skipalign {

namespace {

struct Variant {
    std::vector<std::string> case_ids;
    Trace events;
};

Model load_model_file(const std::string& path) {
    return validate_model(parse_tree_text(read_file(path)));
}

LogFormat pick_format(const RunConfig& cfg) {
    if (cfg.format == "xes") return LogFormat::Xes;
    if (cfg.format == "csv") return LogFormat::Csv;
    if (!cfg.format.empty())
        raise(Errc::FormatError, "unknown log format '" + cfg.format + "'");
    std::string p = cfg.log_path;
    std::transform(p.begin(), p.end(), p.begin(),
                   [](unsigned char c) { return (char)std::tolower(c); });
    if (p.ends_with(".xes")) return LogFormat::Xes;
    if (p.ends_with(".csv")) return LogFormat::Csv;
    raise(Errc::FormatError,
          "cannot infer log format from '" + cfg.log_path + "'; pass --format");
}

Heuristic pick_heuristic(const RunConfig& cfg) {
    if (cfg.heuristic == "zero") return Heuristic::Zero;
    if (cfg.heuristic == "model-remainder") return Heuristic::ModelRemainder;
    raise(Errc::FormatError, "unknown heuristic '" + cfg.heuristic + "'");
}

void check_common(const RunConfig& cfg) {
    if (cfg.max_states == 0) raise(Errc::FormatError, "--max-states must be positive");
    if (cfg.workers == 0) raise(Errc::FormatError, "--workers must be positive");
}

std::vector<Variant> group_variants(const std::vector<CaseTrace>& cases) {
    std::vector<Variant> out;
    std::map<Trace, std::size_t> index;
    for (const CaseTrace& ct : cases) {
        auto [it, fresh] = index.try_emplace(ct.second, out.size());
        if (fresh) out.push_back(Variant{{}, ct.second});
        out[it->second].case_ids.push_back(ct.first);
    }
    return out;
}

void run_pool(unsigned workers, std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::size_t width = std::min<std::size_t>(workers, n);
    pool.reserve(width);
    for (std::size_t w = 0; w < width; ++w)
        pool.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    for (std::thread& t : pool) t.join();
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const std::string& w : warnings) err << "warning: " << w << "\n";
}

}  // namespace

bool result_sets_equal(const std::vector<SkipAlignment>& a,
                       const std::vector<SkipAlignment>& b) {
    std::set<MoveSeq> sa, sb;
    for (const SkipAlignment& d : a) sa.insert(d.moves);
    for (const SkipAlignment& d : b) sb.insert(d.moves);
    return sa == sb;
}

int verify_exit_code(const std::vector<VerifyOutcome>& outcomes) {
    bool budget = false;
    for (VerifyOutcome o : outcomes) {
        if (o == VerifyOutcome::Mismatch) return 4;
        if (o == VerifyOutcome::BudgetExceeded) budget = true;
    }
    return budget ? 3 : 0;
}

int cmd_align(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        check_common(cfg);
        Heuristic h = pick_heuristic(cfg);
        Model m = load_model_file(cfg.model_path);
        std::vector<std::string> warnings;
        std::vector<CaseTrace> cases = parse_log_file(cfg.log_path, pick_format(cfg), &warnings);
        print_warnings(warnings, err);
        std::vector<Variant> variants = group_variants(cases);

        ResultDocument doc;
        doc.model_text = print_tree(m);
        doc.traces.resize(variants.size());
        SearchLimits limits{cfg.max_states};
        run_pool(cfg.workers, variants.size(), [&](std::size_t i) {
            const Variant& v = variants[i];
            TraceResult& t = doc.traces[i];
            t.id = v.case_ids.front();
            t.case_ids = v.case_ids;
            t.events = v.events;
            try {
                AllOptimalResult r = enumerate_all_optimal(m, v.events, h, limits);
                t.optimal_cost = r.optimal_cost;
                t.alignments.reserve(r.alignments.size());
                for (SkipAlignment& d : r.alignments)
                    t.alignments.push_back(
                        AlignmentResult{total_cost(m, d.moves), std::move(d.moves)});
            } catch (const Error& e) {
                t.error = std::string(errc_name(e.code())) + ": " + e.what();
            } catch (const std::exception& e) {
                t.error = std::string("InternalError: ") + e.what();
            }
        });

        std::string text = write_results(doc);
        if (cfg.out_path.empty())
            out << text;
        else
            write_file(cfg.out_path, text);
        for (const TraceResult& t : doc.traces)
            if (!t.error.empty()) {
                err << "trace '" << t.id << "' failed: " << t.error << "\n";
            }
        bool partial = std::any_of(doc.traces.begin(), doc.traces.end(),
                                   [](const TraceResult& t) { return !t.error.empty(); });
        return partial ? 2 : 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        check_common(cfg);
        Heuristic h = pick_heuristic(cfg);
        Model m = load_model_file(cfg.model_path);
        std::vector<std::string> warnings;
        std::vector<CaseTrace> cases = parse_log_file(cfg.log_path, pick_format(cfg), &warnings);
        print_warnings(warnings, err);
        std::vector<Variant> variants = group_variants(cases);

        std::vector<VerifyOutcome> outcomes(variants.size(), VerifyOutcome::Ok);
        std::vector<std::string> reports(variants.size());
        SearchLimits limits{cfg.max_states};
        // input errors inside a worker surface after the join
        std::vector<std::string> hard_errors(variants.size());
        run_pool(cfg.workers, variants.size(), [&](std::size_t i) {
            const Variant& v = variants[i];
            std::ostringstream line;
            try {
                AllOptimalResult res = enumerate_all_optimal(m, v.events, h, limits);
                std::vector<SkipAlignment> reference =
                    coinciding_normal_forms(m, v.events, cfg.oracle_budget);
                if (result_sets_equal(res.alignments, reference)) {
                    outcomes[i] = VerifyOutcome::Ok;
                    line << v.case_ids.front() << ": OK (cost " << res.optimal_cost << ", "
                         << res.alignments.size() << " normal forms)\n";
                } else {
                    outcomes[i] = VerifyOutcome::Mismatch;
                    line << v.case_ids.front() << ": MISMATCH\n";
                    line << "  search returned:\n";
                    for (const SkipAlignment& d : res.alignments)
                        line << "    " << moves_to_string(d.moves) << "\n";
                    line << "  oracle expects:\n";
                    for (const SkipAlignment& d : reference)
                        line << "    " << moves_to_string(d.moves) << "\n";
                }
            } catch (const Error& e) {
                if (e.code() == Errc::BudgetExceeded || e.code() == Errc::MaxStatesExceeded) {
                    outcomes[i] = VerifyOutcome::BudgetExceeded;
                    line << v.case_ids.front() << ": BUDGET EXCEEDED (" << e.what() << ")\n";
                } else {
                    hard_errors[i] = e.what();
                }
            }
            reports[i] = line.str();
        });
        for (const std::string& he : hard_errors)
            if (!he.empty()) raise(Errc::InternalError, he);
        for (const std::string& r : reports) out << r;
        return verify_exit_code(outcomes);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_stats(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.out_path.empty())
            raise(Errc::IoError, "stats needs --out pointing at a results document");
        ResultDocument doc = load_results(read_file(cfg.out_path));

        std::size_t cases = 0, errors = 0;
        std::map<std::string, std::size_t> log_moves, sync_moves;
        std::map<std::string, std::size_t> skips;  // key: block id text
        std::map<int, std::size_t> cost_histogram;
        for (const TraceResult& t : doc.traces) {
            cases += t.case_ids.size();
            if (!t.error.empty()) {
                ++errors;
                continue;
            }
            ++cost_histogram[t.optimal_cost];
            for (const AlignmentResult& a : t.alignments)
                for (const Move& mv : a.moves) switch (mv.kind) {
                    case MoveKind::Log: ++log_moves[mv.label]; break;
                    case MoveKind::Sync: ++sync_moves[mv.label]; break;
                    case MoveKind::Skip: ++skips["B" + std::to_string(mv.block)]; break;
                    default: break;
                    }
        }

        out << "traces: " << doc.traces.size() << " variants, " << cases << " cases, "
            << errors << " failed\n";
        out << "optimal cost histogram:\n";
        for (const auto& [cost, n] : cost_histogram)
            out << "  cost " << cost << ": " << n << "\n";
        out << "log moves per activity:\n";
        for (const auto& [label, n] : log_moves) out << "  " << label << ": " << n << "\n";
        out << "sync moves per activity:\n";
        for (const auto& [label, n] : sync_moves) out << "  " << label << ": " << n << "\n";
        out << "skips per block:\n";
        for (const auto& [block, n] : skips) out << "  " << block << ": " << n << "\n";
        out << "normal forms per trace:\n";
        for (const TraceResult& t : doc.traces)
            if (t.error.empty())
                out << "  " << t.id << ": " << t.alignments.size() << "\n";
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    switch (cfg.command) {
    case Command::Align: return cmd_align(cfg, out, err);
    case Command::Verify: return cmd_verify(cfg, out, err);
    case Command::Stats: return cmd_stats(cfg, out, err);
    }
    err << "error: unknown command\n";
    return 1;
}

}  // namespace skipalign
