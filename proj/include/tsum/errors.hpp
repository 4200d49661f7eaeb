#ifndef TSUM_ERRORS_HPP
#define TSUM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tsum {

// Input outside the mathematical domain of an operation (|p| >= 1, a = 0, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Term ratio hit a pole of the underlying elliptic function.
class PoleError : public std::domain_error {
public:
    explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

// Nonterminating series whose term ratio does not decay.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// A randomly drawn configuration landed too close to a zero of a theta
// factor. Identities hold off a measure-zero set; fuzzers catch this and
// redraw instead of reporting a failure.
class ResampleSignal : public std::runtime_error {
public:
    explicit ResampleSignal(const std::string& what) : std::runtime_error(what) {}
};

// Surface model construction failed its certificates (quadrature did not
// converge, period matrix not symmetric / Im not positive definite).
class ConstructionError : public std::runtime_error {
public:
    explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tsum

#endif
