#ifndef LATEMBED_ERRORS_HPP
#define LATEMBED_ERRORS_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace latembed {

// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two objects with incompatible dimensions met in one operation.
class DimensionMismatch : public Error {
public:
    DimensionMismatch(int lhs, int rhs, const std::string& context)
        : Error(context + ": dimension mismatch, " + std::to_string(lhs) +
                " vs " + std::to_string(rhs)),
          lhs_dimension(lhs),
          rhs_dimension(rhs) {}

    int lhs_dimension;
    int rhs_dimension;
};

// The level-set gradient vanished where a normal direction was needed.
class SingularGradient : public Error {
public:
    SingularGradient(Eigen::VectorXd where, const std::string& context)
        : Error(context + ": level-set gradient vanishes (medial-axis point)"),
          location(std::move(where)) {}

    Eigen::VectorXd location;
};

// An iterative solve ran out of iterations; carries the last iterate.
class NonConvergence : public Error {
public:
    NonConvergence(Eigen::VectorXd iterate, double res, const std::string& context)
        : Error(context + ": no convergence, residual " + std::to_string(res)),
          last_iterate(std::move(iterate)),
          residual(res) {}

    Eigen::VectorXd last_iterate;
    double residual;
};

// A chart Jacobian lost full column rank.
class ImmersionViolation : public Error {
public:
    using Error::Error;
};

// Requested functionality is outside the supported dimension range.
class NotImplemented : public Error {
public:
    using Error::Error;
};

// A query point left the manifold's declared working neighborhood.
class OutsideWorkingNeighborhood : public Error {
public:
    using Error::Error;
};

// An embedding state was asked about a lattice point it does not cover.
class MissingEmbedding : public Error {
public:
    using Error::Error;
};

}  // namespace latembed

#endif
