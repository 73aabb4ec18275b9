#pragma once

// The spin algebra L^n: R^n with x o y = (<x,y>, x0*ybar + y0*xbar), its unit
// element, the Lorentz cone {x : |xbar| <= x0} and the signature matrix
// J = diag(1, -1, ..., -1).

#include "common.hpp"

#include <cmath>
#include <ostream>
#include <utility>

namespace lorentz {

/// Element of L^n stored in block form (x0, xbar), n = 1 + xbar.size() >= 2.
template <typename Scalar = double>
class SpinVector {
public:
    SpinVector(Scalar x0, Vector<Scalar> xbar) : x0_(x0), xbar_(std::move(xbar)) {
        if (xbar_.size() < 1)
            throw std::invalid_argument("SpinVector: dimension must be at least 2");
        if (!std::isfinite(static_cast<double>(x0_)) || !xbar_.allFinite())
            throw std::invalid_argument("SpinVector: non-finite entry");
    }

    /// Splits a flat n-vector into (x0, xbar).
    template <typename Derived>
    static SpinVector from_flat(const Eigen::MatrixBase<Derived>& v) {
        if (v.cols() != 1 || v.rows() < 2)
            throw std::invalid_argument("SpinVector::from_flat: need a column of length >= 2");
        return SpinVector(v(0), v.tail(v.rows() - 1));
    }

    Vector<Scalar> flat() const {
        Vector<Scalar> v(dim());
        v(0) = x0_;
        v.tail(xbar_.size()) = xbar_;
        return v;
    }

    Scalar x0() const { return x0_; }
    const Vector<Scalar>& xbar() const { return xbar_; }
    Index dim() const { return xbar_.size() + 1; }

    /// Euclidean norm of the full n-vector.
    Scalar norm() const { return std::hypot(x0_, xbar_.norm()); }

    bool operator==(const SpinVector& other) const {
        return x0_ == other.x0_ && xbar_ == other.xbar_;
    }

private:
    Scalar x0_;
    Vector<Scalar> xbar_;
};

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const SpinVector<Scalar>& x) {
    return os << "(" << x.x0() << "; " << x.xbar().transpose() << ")";
}

/// Standard inner product of the full n-vectors.
template <typename Scalar>
Scalar inner(const SpinVector<Scalar>& x, const SpinVector<Scalar>& y) {
    if (x.dim() != y.dim())
        throw std::invalid_argument("inner: dimension mismatch");
    return x.x0() * y.x0() + x.xbar().dot(y.xbar());
}

template <typename Scalar>
SpinVector<Scalar> jordan_product(const SpinVector<Scalar>& x, const SpinVector<Scalar>& y) {
    if (x.dim() != y.dim())
        throw std::invalid_argument("jordan_product: dimension mismatch (" +
                                    std::to_string(x.dim()) + " vs " + std::to_string(y.dim()) +
                                    ")");
    return SpinVector<Scalar>(inner(x, y), x.x0() * y.xbar() + y.x0() * x.xbar());
}

/// The unit element e = (1, 0, ..., 0).
template <typename Scalar = double>
SpinVector<Scalar> unit(Index n) {
    detail::require_dim(n, "unit");
    return SpinVector<Scalar>(Scalar(1), Vector<Scalar>::Zero(n - 1));
}

enum class ConeRegion { Interior, Boundary, Outside };

inline const char* to_string(ConeRegion r) {
    switch (r) {
        case ConeRegion::Interior: return "interior";
        case ConeRegion::Boundary: return "boundary";
        case ConeRegion::Outside: return "outside";
    }
    return "?";
}

inline std::ostream& operator<<(std::ostream& os, ConeRegion r) { return os << to_string(r); }

/// Position of x relative to the Lorentz cone, with the margin x0 - |xbar|
/// compared against tol * max(1, |x|).
template <typename Scalar>
ConeRegion cone_classify(const SpinVector<Scalar>& x, Scalar tol = Scalar(kDefaultTol)) {
    if (!(tol >= 0))
        throw std::invalid_argument("cone_classify: tol must be non-negative");
    const Scalar margin = x.x0() - x.xbar().norm();
    const Scalar band = detail::scaled(tol, x.norm());
    if (std::abs(margin) <= band) return ConeRegion::Boundary;
    return margin > 0 ? ConeRegion::Interior : ConeRegion::Outside;
}

/// J_n = diag(1, -1, ..., -1).
template <typename Scalar = double>
Matrix<Scalar> signature_matrix(Index n) {
    detail::require_dim(n, "signature_matrix");
    Vector<Scalar> d = Vector<Scalar>::Constant(n, Scalar(-1));
    d(0) = Scalar(1);
    return d.asDiagonal();
}

}  // namespace lorentz
