#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace niah {

// Base for all library errors. Operation-specific failures derive from this
// so callers can match coarsely or precisely.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OverlapError : Error {
    using Error::Error;
};
struct DecodeError : Error {
    using Error::Error;
};
struct TooShortError : Error {
    using Error::Error;
};
struct UnknownLabel : Error {
    using Error::Error;
};
struct PoolTooSmall : Error {
    using Error::Error;
};
struct BackendError : Error {
    using Error::Error;
};
struct SpanOutOfRange : Error {
    using Error::Error;
};
struct InvalidText : Error {
    using Error::Error;
};
struct RegionOverlap : Error {
    using Error::Error;
};
struct ResolutionMismatch : Error {
    using Error::Error;
};
struct Infeasible : Error {
    using Error::Error;
};
struct FilterExhausted : Error {
    using Error::Error;
};
struct AdapterTimeout : Error {
    using Error::Error;
};
struct AdapterRejected : Error {
    using Error::Error;
};
struct MediaTooLarge : Error {
    using Error::Error;
};
struct JudgeUnparseable : Error {
    using Error::Error;
};
struct DegenerateVector : Error {
    using Error::Error;
};
struct SchemaMismatch : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

// Thrown by aggregation when the manifest contains samples with no record.
struct MissingRecords : Error {
    explicit MissingRecords(std::vector<std::string> ids)
        : Error("missing eval records for " + std::to_string(ids.size()) + " sample(s)"),
          sample_ids(std::move(ids)) {}
    std::vector<std::string> sample_ids;
};

}  // namespace niah
