#pragma once

#include <stdexcept>
#include <string>

namespace polyloc {

// Series with non-summable exponent.
class DivergentSumError : public std::domain_error {
public:
    explicit DivergentSumError(const std::string& what) : std::domain_error(what) {}
};

// (H - E) not invertible at working precision; carries the condition estimate.
class SingularResolventError : public std::runtime_error {
public:
    SingularResolventError(const std::string& what, double cond)
        : std::runtime_error(what), condition_estimate(cond) {}
    double condition_estimate;
};

class InsufficientDataError : public std::runtime_error {
public:
    explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

// Scale recursion left the representable range; last_k is the last valid index.
class ScaleOverflowError : public std::runtime_error {
public:
    ScaleOverflowError(const std::string& what, int last_k)
        : std::runtime_error(what), last_k(last_k) {}
    int last_k;
};

class DegenerateScaleError : public std::runtime_error {
public:
    explicit DegenerateScaleError(const std::string& what) : std::runtime_error(what) {}
};

// A potential value was requested for a site the realization does not cover.
class IncompleteRealizationError : public std::runtime_error {
public:
    explicit IncompleteRealizationError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run configuration; path identifies the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string path)
        : std::runtime_error(what + " (at " + path + ")"), path(std::move(path)) {}
    std::string path;
};

class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polyloc
