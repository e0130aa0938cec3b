#pragma once

#include <stdexcept>
#include <string>

namespace entrev {

// Invalid argument: out-of-range strengths, bad qubit indices, wrong shapes.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A tensor product would leave the supported dimension range (max 16).
class DimensionOverflowError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A value fails the numeric contract it is supposed to satisfy
// (non-Hermitian where Hermitian is required, broken normalization, ...).
class ContractViolationError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A heralded branch with probability below the structural-zero cutoff was
// requested; distinguishes "impossible outcome" from underflow.
class ZeroProbabilityBranchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File or stream failure; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace entrev
