#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lorentz {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Relative tolerance used when a caller does not pass one.
inline constexpr double kDefaultTol = 1e-9;

/// Thrown when a matrix fails the automorphism test where one is required.
class NotAnAutomorphism : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

template <typename Scalar>
Scalar scaled(Scalar tol, Scalar scale) {
    return tol * std::max(Scalar(1), scale);
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
    if (!m.allFinite())
        throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
    if (m.rows() != m.cols())
        throw std::invalid_argument(std::string(what) + ": matrix is " + std::to_string(m.rows()) +
                                    "x" + std::to_string(m.cols()) + ", expected square");
}

inline void require_dim(Index n, const char* what) {
    if (n < 2)
        throw std::invalid_argument(std::string(what) + ": dimension must be at least 2, got " +
                                    std::to_string(n));
}

}  // namespace detail
}  // namespace lorentz
