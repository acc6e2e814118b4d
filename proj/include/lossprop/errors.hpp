#pragma once

#include <stdexcept>
#include <string>

namespace lossprop {

// All amplitudes of a candidate state are zero; no normalization possible.
struct AllZeroAmplitudes : std::invalid_argument {
    explicit AllZeroAmplitudes(const std::string& what) : std::invalid_argument(what) {}
};

// A coefficient grid or matrix does not have the shape implied by its cutoff.
struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// Requested photon number outside the supported range.
struct CutoffExceeded : std::invalid_argument {
    explicit CutoffExceeded(const std::string& what) : std::invalid_argument(what) {}
};

// Beam-splitter loss fraction outside the open interval (0, 1).
struct InvalidLossFraction : std::invalid_argument {
    explicit InvalidLossFraction(const std::string& what) : std::invalid_argument(what) {}
};

// Propagation distance outside the domain a medium profile is defined on.
struct OutOfDomain : std::invalid_argument {
    explicit OutOfDomain(const std::string& what) : std::invalid_argument(what) {}
};

// Ensemble member index outside [0, count).
struct IndexOutOfRange : std::out_of_range {
    explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

// Too few points for a statistical fit.
struct InsufficientData : std::invalid_argument {
    explicit InsufficientData(const std::string& what) : std::invalid_argument(what) {}
};

// The dense Hermitian eigensolver did not converge.
struct EigensolverFailure : std::runtime_error {
    explicit EigensolverFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lossprop
