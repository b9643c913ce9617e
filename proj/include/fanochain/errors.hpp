#ifndef FANOCHAIN_ERRORS_HPP
#define FANOCHAIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fanochain {

// A model whose structure violates its variant contract (zero lead hopping,
// wrong attachment topology, non-finite couplings, ...).
struct InvalidModelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Frequency outside the open propagating band |omega| < 2|J|.
struct OutOfBandError : std::domain_error {
    using std::domain_error::domain_error;
};

// Effective potential evaluated at one of its poles.
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

// The boundary-matched linear system is singular (or numerically so).
struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested a closed-form analysis outside its domain of validity
// (e.g. gain/loss-imbalanced model passed to a balanced-only root finder).
struct UnsupportedAnalysisError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace fanochain

#endif
