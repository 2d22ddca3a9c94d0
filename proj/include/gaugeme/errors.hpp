#pragma once

#include <stdexcept>
#include <string>

namespace gaugeme {

// Bad physical input: non-finite values, violated invariants, unsupported
// combinations. Maps to CLI exit code 3.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation exactly at a removable-singularity point (e.g. the spectral
// weight f- at omega_k == omega0).
class singular_point_error : public validation_error {
public:
    explicit singular_point_error(const std::string& what) : validation_error(what) {}
};

// Unknown preset or enum name.
class lookup_error : public validation_error {
public:
    explicit lookup_error(const std::string& what) : validation_error(what) {}
};

// Malformed scenario file; message carries file:line.
class parse_error : public validation_error {
public:
    explicit parse_error(const std::string& what) : validation_error(what) {}
};

// Quadrature or ODE failure. Carries the error estimate that was achieved
// when the tolerance could not be met. Maps to CLI exit code 4.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const { return achieved_error_; }

private:
    double achieved_error_;
};

} // namespace gaugeme
