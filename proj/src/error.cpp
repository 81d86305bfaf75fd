#include "ifslab/error.hpp"

namespace ifslab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedSpec: return "MalformedSpec";
    case ErrorCode::EmptyAlphabet: return "EmptyAlphabet";
    case ErrorCode::ContractionViolation: return "ContractionViolation";
    case ErrorCode::SelfMapViolation: return "SelfMapViolation";
    case ErrorCode::UnknownLetter: return "UnknownLetter";
    case ErrorCode::UnsupportedExponent: return "UnsupportedExponent";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NonsimilarityInfiniteAlphabet: return "NonsimilarityInfiniteAlphabet";
    case ErrorCode::UndeterminedSign: return "UndeterminedSign";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::EmptyRecords: return "EmptyRecords";
    case ErrorCode::ThetaNotConstant: return "ThetaNotConstant";
    case ErrorCode::PathTooShort: return "PathTooShort";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::SeedMismatch: return "SeedMismatch";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::InfiniteAlphabetUnsupported: return "InfiniteAlphabetUnsupported";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

} // namespace ifslab
