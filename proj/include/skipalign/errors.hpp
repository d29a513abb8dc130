#ifndef SKIPALIGN_ERRORS_HPP
#define SKIPALIGN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace skipalign {

enum class Errc {
    ArityViolation,
    EmptyLabel,
    EmptyTree,
    UnknownBlock,
    NotEnabled,
    NotSkippable,
    InvalidAlignment,
    StaleRedex,
    SyntaxError,
    FormatError,
    MissingColumn,
    IoError,
    BudgetExceeded,
    MaxStatesExceeded,
    NoExecution,
    InternalError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace skipalign

#endif
