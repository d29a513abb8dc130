#ifndef SKIPALIGN_IO_HPP
#define SKIPALIGN_IO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skipalign/alignment.hpp"
#include "skipalign/model.hpp"

namespace skipalign {

enum class LogFormat : std::uint8_t { Xes, Csv };

using CaseTrace = std::pair<std::string, Trace>;  // case id, events in order

// Grammar: T ::= label | tau | ->(T,...) | X(T,...) | +(T,...) | *(T,T)
// Labels are [A-Za-z0-9_]+ or single-quoted with '' as the escaped quote.
// Errors: SyntaxError with a 1-based character offset.
TreeNode parse_tree_text(const std::string& text);

// Canonical text for the grammar above; parse_tree_text(print_tree(t)) == t.
std::string print_tree(const TreeNode&);
std::string print_tree(const Model&);

// CSV: header `case_id,activity[,timestamp]`, extra columns ignored; events
// grouped by case in file order; a timestamp column sorts each case stably
// (numerically when every value parses as a number, else lexicographically).
// Errors: MissingColumn, FormatError.
std::vector<CaseTrace> parse_csv_log(const std::string& content);

// XES subset: trace/event elements and their concept:name strings; everything
// else is ignored and aggregated into one warning line. Errors: FormatError.
std::vector<CaseTrace> parse_xes_log(const std::string& content,
                                     std::vector<std::string>* warnings = nullptr);

std::vector<CaseTrace> parse_log_file(const std::string& path, LogFormat,
                                      std::vector<std::string>* warnings = nullptr);

std::string read_file(const std::string& path);             // IoError
void write_file(const std::string& path, const std::string& content);

struct AlignmentResult {
    int cost = 0;
    MoveSeq moves;
};

// One log variant: all cases sharing the same event sequence.
struct TraceResult {
    std::string id;                     // first case id of the variant
    std::vector<std::string> case_ids;  // all cases, in input order
    Trace events;
    int optimal_cost = 0;
    std::vector<AlignmentResult> alignments;
    std::string error;  // when nonempty, the variant failed and has no alignments
};

struct ResultDocument {
    std::string model_text;  // canonical tree text; lets the document re-validate
    std::vector<TraceResult> traces;
};

// Deterministic JSON, schema "skipalign-results/1", stable field order.
std::string write_results(const ResultDocument&);

// Parses a result document and re-validates every alignment against the
// embedded model (log projection, skip-language membership, move costs).
// Errors: FormatError.
ResultDocument load_results(const std::string& json_text);

} // namespace skipalign

#endif
