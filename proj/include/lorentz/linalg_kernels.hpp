#pragma once

// Dense kernels behind the factorization: the closed-form square root of
// I + c c^T and its inverse, the reflector sending e1 to c/|c|, orthogonality
// residuals, Haar-random orthogonal matrices and the boost T_alpha.

#include "common.hpp"
#include "random.hpp"

#include <cmath>
#include <cstdint>

namespace lorentz {

/// sqrt(I + c c^T) = I + beta c c^T with beta = 1/(a + 1), a = sqrt(1 + |c|^2).
///
/// beta is the cancellation-free form of (a - 1)/|c|^2. The inverse is
/// I + gamma c c^T with gamma = -1/(a (a + 1)). Products with P or P^{-1} are
/// rank-one updates and never form the dense matrix.
template <typename Scalar = double>
struct RankOneSqrt {
    /// Below this |c|^2 the update is dropped and P = I.
    static constexpr double kUnderflow = 1e-300;

    Index m = 0;
    Vector<Scalar> c;
    Scalar a = 1;
    Scalar beta = 0;
    Scalar gamma = 0;

    template <typename Derived>
    explicit RankOneSqrt(const Eigen::MatrixBase<Derived>& c_in) : m(c_in.size()), c(c_in) {
        using std::sqrt;
        if (m < 1) throw std::invalid_argument("RankOneSqrt: empty vector");
        detail::require_finite(c, "RankOneSqrt");
        const Scalar len = c.stableNorm();
        a = std::hypot(Scalar(1), len);
        if (len * len >= Scalar(kUnderflow) || len >= Scalar(1)) {
            beta = Scalar(1) / (a + Scalar(1));
            gamma = Scalar(-1) / (a * (a + Scalar(1)));
        }
        // Split the coefficients so that the outer products cannot overflow.
        up_ = sqrt(beta) * c;
        down_ = sqrt(-gamma) * c;
    }

    Matrix<Scalar> dense() const {
        Matrix<Scalar> p = Matrix<Scalar>::Identity(m, m);
        p.noalias() += up_ * up_.transpose();
        return p;
    }

    Matrix<Scalar> inverse_dense() const {
        Matrix<Scalar> p = Matrix<Scalar>::Identity(m, m);
        p.noalias() -= down_ * down_.transpose();
        return p;
    }

    /// P * rhs in O(m * cols).
    template <typename Derived>
    Matrix<Scalar> times(const Eigen::MatrixBase<Derived>& rhs) const {
        Matrix<Scalar> out = rhs;
        const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> row = up_.transpose() * rhs;
        out.noalias() += up_ * row;
        return out;
    }

    /// P^{-1} * rhs in O(m * cols).
    template <typename Derived>
    Matrix<Scalar> inverse_times(const Eigen::MatrixBase<Derived>& rhs) const {
        Matrix<Scalar> out = rhs;
        const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> row = down_.transpose() * rhs;
        out.noalias() -= down_ * row;
        return out;
    }

private:
    Vector<Scalar> up_;
    Vector<Scalar> down_;
};

template <typename Derived>
auto sqrt_rank_one(const Eigen::MatrixBase<Derived>& c) {
    return RankOneSqrt<typename Derived::Scalar>(c).dense();
}

template <typename Derived>
auto inv_sqrt_rank_one(const Eigen::MatrixBase<Derived>& c) {
    return RankOneSqrt<typename Derived::Scalar>(c).inverse_dense();
}

/// Orthogonal V with V e1 = c/|c|: the reflector I - 2 w w^T / (w^T w) with
/// w = c/|c| - e1. No sign flip, so V e1 is +c/|c|. Returns I for c = 0 and
/// when |w| <= 1e-14.
template <typename Derived>
auto householder_to_direction(const Eigen::MatrixBase<Derived>& c) {
    using Scalar = typename Derived::Scalar;
    const Index m = c.size();
    if (m < 1) throw std::invalid_argument("householder_to_direction: empty vector");
    detail::require_finite(c, "householder_to_direction");

    Matrix<Scalar> v = Matrix<Scalar>::Identity(m, m);
    const Scalar len = c.stableNorm();
    if (len == Scalar(0)) return v;

    Vector<Scalar> w = c / len;
    // u1 - 1 = -(u2^2 + ... + um^2)/(1 + u1) avoids cancellation when u ~ e1.
    const Scalar tail_sq = w.tail(m - 1).squaredNorm();
    w(0) = w(0) > Scalar(0) ? -tail_sq / (Scalar(1) + w(0)) : w(0) - Scalar(1);

    const Scalar w_sq = w.squaredNorm();
    if (std::sqrt(w_sq) <= Scalar(1e-14)) return v;
    w *= std::sqrt(Scalar(2) / w_sq);
    v.noalias() -= w * w.transpose();
    return v;
}

/// |M^T M - I|_F.
template <typename Derived>
auto orthogonality_residual(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    detail::require_square(m, "orthogonality_residual");
    if (m.rows() < 1) throw std::invalid_argument("orthogonality_residual: empty matrix");
    Matrix<Scalar> gram = Matrix<Scalar>::Zero(m.cols(), m.cols());
    gram.template selfadjointView<Eigen::Lower>().rankUpdate(m.transpose());
    gram.diagonal().array() -= Scalar(1);
    // Strict lower part counts twice in the full symmetric matrix.
    const Scalar diag_sq = gram.diagonal().squaredNorm();
    const Scalar lower_sq = gram.template triangularView<Eigen::StrictlyLower>().toDenseMatrix().squaredNorm();
    return std::sqrt(diag_sq + Scalar(2) * lower_sq);
}

/// Haar-distributed m x m orthogonal matrix: Gaussian fill, orthogonal QR
/// factor, columns re-signed so that R has a positive diagonal.
template <typename Scalar = double>
Matrix<Scalar> sample_haar_orthogonal(Index m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("sample_haar_orthogonal: side must be at least 1");
    Rng rng(seed);
    Matrix<double> z(m, m);
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < m; ++i) z(i, j) = rng.normal();

    Eigen::HouseholderQR<Matrix<double>> qr(z);
    Matrix<double> q = qr.householderQ();
    const auto& r = qr.matrixQR();
    for (Index j = 0; j < m; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q.template cast<Scalar>();
}

/// T_alpha: [[sqrt(1+alpha^2), alpha], [alpha, sqrt(1+alpha^2)]] bordered by I_{n-2}.
template <typename Scalar = double>
Matrix<Scalar> boost_matrix(Scalar alpha, Index n) {
    detail::require_dim(n, "boost_matrix");
    if (!(alpha >= 0) || !std::isfinite(static_cast<double>(alpha)))
        throw std::invalid_argument("boost_matrix: alpha must be finite and non-negative");
    Matrix<Scalar> t = Matrix<Scalar>::Identity(n, n);
    const Scalar cosh_like = std::hypot(Scalar(1), alpha);
    t(0, 0) = cosh_like;
    t(1, 1) = cosh_like;
    t(0, 1) = alpha;
    t(1, 0) = alpha;
    return t;
}

}  // namespace lorentz
