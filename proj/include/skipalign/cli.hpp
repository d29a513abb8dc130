#ifndef SKIPALIGN_CLI_HPP
#define SKIPALIGN_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "skipalign/alignment.hpp"
#include "skipalign/oracle.hpp"

namespace skipalign {

enum class Command : std::uint8_t { Align, Verify, Stats };

struct RunConfig {
    Command command = Command::Align;
    std::string model_path;
    std::string log_path;
    std::string format;  // "", "xes", "csv"; empty infers from the extension
    std::string heuristic = "model-remainder";
    std::size_t max_states = 1'000'000;
    std::string out_path;  // align: output file (empty = stdout); stats: results input
    unsigned workers = 1;
    OracleBudget oracle_budget;  // verify only
};

// Exit codes: 0 ok, 1 input error, 2 partial per-trace failure, 3 oracle
// budget exceeded, 4 verification mismatch.
int cmd_align(const RunConfig&, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig&, std::ostream& out, std::ostream& err);
int cmd_stats(const RunConfig&, std::ostream& out, std::ostream& err);
int run_command(const RunConfig&, std::ostream& out, std::ostream& err);

// verify internals, exposed for the negative-path tests
enum class VerifyOutcome : std::uint8_t { Ok, Mismatch, BudgetExceeded };
bool result_sets_equal(const std::vector<SkipAlignment>&, const std::vector<SkipAlignment>&);
int verify_exit_code(const std::vector<VerifyOutcome>&);

} // namespace skipalign

#endif
