#pragma once

#include <stdexcept>
#include <string>

namespace subcount {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define SUBCOUNT_DEFINE_ERROR(NAME)                                           \
    struct NAME : Error {                                                     \
        using Error::Error;                                                   \
    }

SUBCOUNT_DEFINE_ERROR(ValidationError);
SUBCOUNT_DEFINE_ERROR(SizeLimitExceeded);
SUBCOUNT_DEFINE_ERROR(EmptySelection);
SUBCOUNT_DEFINE_ERROR(IndexOutOfRange);
SUBCOUNT_DEFINE_ERROR(PatternTooLarge);
SUBCOUNT_DEFINE_ERROR(NotAStar);
SUBCOUNT_DEFINE_ERROR(BudgetExceeded);
SUBCOUNT_DEFINE_ERROR(DimensionMismatch);
SUBCOUNT_DEFINE_ERROR(DepthUnsupported);
SUBCOUNT_DEFINE_ERROR(EmptySplit);
SUBCOUNT_DEFINE_ERROR(TooFewGraphs);
SUBCOUNT_DEFINE_ERROR(GenerationFailure);
SUBCOUNT_DEFINE_ERROR(InternalError);
SUBCOUNT_DEFINE_ERROR(DuplicateId);
SUBCOUNT_DEFINE_ERROR(FileNotFound);
SUBCOUNT_DEFINE_ERROR(OverflowError);

#undef SUBCOUNT_DEFINE_ERROR

// Text parser errors carry a 1-based source position.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ")"),
          line(line_),
          column(column_) {}
};

}  // namespace subcount
