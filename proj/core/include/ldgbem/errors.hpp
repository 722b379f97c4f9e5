#pragma once

#include <stdexcept>
#include <string>

namespace ldgbem {

/// Invalid user-facing parameter (mesh level, quadrature order, penalty, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inconsistent mesh topology or geometry.
class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Point or arclength query outside the domain of a discrete object.
class QueryError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Boundary partitions or blocks that cannot be paired.
class AssemblyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Factorization failed or the residual check did not pass.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive reference quadrature did not converge.
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ldgbem
