#pragma once

#include <stdexcept>
#include <string>

namespace qrs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NormalizationUnreachable : Error {
    using Error::Error;
};

struct NonResidue : Error {
    using Error::Error;
};

struct NotCoprime : Error {
    using Error::Error;
};

struct HeightExhausted : Error {
    using Error::Error;
};

struct PreconditionFailed : Error {
    using Error::Error;
};

struct WitnessFailed : Error {
    using Error::Error;
};

struct DegenerateSolution : Error {
    using Error::Error;
};

struct HypothesisViolated : Error {
    using Error::Error;
};

struct InvalidPerturbation : Error {
    using Error::Error;
};

struct NotACoboundary : Error {
    using Error::Error;
};

struct UsageError : Error {
    using Error::Error;
};

} // namespace qrs
