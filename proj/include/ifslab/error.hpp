#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ifslab/bracket.hpp"

namespace ifslab {

enum class ErrorCode {
    MalformedSpec,
    EmptyAlphabet,
    ContractionViolation,
    SelfMapViolation,
    UnknownLetter,
    UnsupportedExponent,
    BudgetExceeded,
    NonsimilarityInfiniteAlphabet,
    UndeterminedSign,
    OutOfDomain,
    EmptyRecords,
    ThetaNotConstant,
    PathTooShort,
    AlphabetMismatch,
    SeedMismatch,
    EmptySequence,
    InfiniteAlphabetUnsupported,
    NoConvergence,
    IoError,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Library exception. `partial` carries the best bracket obtained before the
/// failure when one exists (BudgetExceeded, UndeterminedSign, NoConvergence).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::optional<Bracket> partial = std::nullopt)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), partial_(partial) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::optional<Bracket>& partial() const noexcept { return partial_; }

private:
    ErrorCode code_;
    std::optional<Bracket> partial_;
};

} // namespace ifslab
