#include <iostream>

#include "CLI11.hpp"
#include "skipalign/cli.hpp"

namespace {

void add_input_flags(CLI::App* sub, skipalign::RunConfig& cfg) {
    sub->add_option("--model", cfg.model_path, "process tree file")->required();
    sub->add_option("--log", cfg.log_path, "event log file")->required();
    sub->add_option("--format", cfg.format, "log format: xes or csv (default: by extension)");
    sub->add_option("--heuristic", cfg.heuristic, "zero or model-remainder");
    sub->add_option("--max-states", cfg.max_states, "per-trace search state budget");
    sub->add_option("--workers", cfg.workers, "worker threads over trace variants");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal skip alignments for block-structured workflow models"};
    app.require_subcommand(1);

    skipalign::RunConfig cfg;

    CLI::App* align = app.add_subcommand("align", "compute all optimal skip alignments");
    add_input_flags(align, cfg);
    align->add_option("--out", cfg.out_path, "output path (default: stdout)");

    CLI::App* verify = app.add_subcommand("verify", "cross-check the search against the oracle");
    add_input_flags(verify, cfg);

    CLI::App* stats = app.add_subcommand("stats", "summarize a results document");
    stats->add_option("--out", cfg.out_path, "results document to read")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // help/version exit 0, bad usage is an input error
    }

    if (align->parsed()) cfg.command = skipalign::Command::Align;
    if (verify->parsed()) cfg.command = skipalign::Command::Verify;
    if (stats->parsed()) cfg.command = skipalign::Command::Stats;
    return skipalign::run_command(cfg, std::cout, std::cerr);
}
