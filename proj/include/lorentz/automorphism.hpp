#pragma once

// Membership test for Aut(L^n_+), the compact and canonical factorizations of
// its members, their composition back into matrices, random sampling, and the
// residuals of the block identities every member satisfies.
//
// For S = [[a, b^T], [c, D]] with S^T J S = J = S J S^T:
//   A1  a = sqrt(1 + |c|^2)      B1  a = sqrt(1 + |b|^2)
//   A2  a b = D^T c              B2  a c = D b
//   A3  D^T D = I + b b^T        B3  D D^T = I + c c^T
// and S = nu [[a, c^T], [c, P]] diag(1, U) with P = sqrt(I + c c^T)
//       = nu diag(1, V) T_alpha diag(1, V^T) diag(1, U) with c = alpha V e1.

#include "common.hpp"
#include "linalg_kernels.hpp"
#include "random.hpp"
#include "spin_algebra.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace lorentz {

template <typename Scalar = double>
struct BlockView {
    Scalar a = 0;
    Vector<Scalar> b;  // first row tail
    Vector<Scalar> c;  // first column tail
    Matrix<Scalar> D;

    Index dim() const { return D.rows() + 1; }

    Matrix<Scalar> reassemble() const {
        const Index m = D.rows();
        Matrix<Scalar> s(m + 1, m + 1);
        s(0, 0) = a;
        s.row(0).tail(m) = b.transpose();
        s.col(0).tail(m) = c;
        s.bottomRightCorner(m, m) = D;
        return s;
    }
};

template <typename Derived>
BlockView<typename Derived::Scalar> split_blocks(const Eigen::MatrixBase<Derived>& s) {
    detail::require_square(s, "split_blocks");
    detail::require_dim(s.rows(), "split_blocks");
    const Index m = s.rows() - 1;
    BlockView<typename Derived::Scalar> v;
    v.a = s(0, 0);
    v.b = s.row(0).tail(m).transpose();
    v.c = s.col(0).tail(m);
    v.D = s.bottomRightCorner(m, m);
    return v;
}

template <typename Scalar = double>
struct AutCheckResult {
    bool is_automorphism = false;
    Scalar mu = 0;
    /// max of |S^T J S - mu J|_F and |S J S^T - mu J|_F, over max(1, |S|_F^2).
    Scalar residual_congruence = 0;
    bool cone_forward = false;
};

namespace detail {

// X^T J X - mu J in Frobenius norm, with X^T J X = 2 r r^T - X^T X for r the
// first row of X. When `mu` is empty it is read from entry (0, 0).
template <typename Scalar, typename Derived>
std::pair<Scalar, Scalar> congruence_defect(const Eigen::MatrixBase<Derived>& x,
                                            std::optional<Scalar> mu = std::nullopt) {
    const Index n = x.cols();
    Matrix<Scalar> g = Matrix<Scalar>::Zero(n, n);
    auto sym = g.template selfadjointView<Eigen::Lower>();
    sym.rankUpdate(x.transpose(), Scalar(-1));
    sym.rankUpdate(x.row(0).transpose(), Scalar(2));
    const Scalar scale = mu.value_or(g(0, 0));
    g(0, 0) -= scale;
    g.diagonal().tail(n - 1).array() += scale;
    const Scalar diag_sq = g.diagonal().squaredNorm();
    const Scalar lower_sq =
        g.template triangularView<Eigen::StrictlyLower>().toDenseMatrix().squaredNorm();
    return {scale, std::sqrt(diag_sq + Scalar(2) * lower_sq)};
}

}  // namespace detail

/// Tests S^T J S = mu J and S J S^T = mu J with mu = (S^T J S)(0, 0) > tol,
/// plus (S e)_0 > 0, which rules out the cone-reversing coset.
template <typename Derived>
AutCheckResult<typename Derived::Scalar> check_automorphism(
    const Eigen::MatrixBase<Derived>& s, typename Derived::Scalar tol = kDefaultTol) {
    using Scalar = typename Derived::Scalar;
    detail::require_square(s, "check_automorphism");
    detail::require_dim(s.rows(), "check_automorphism");
    detail::require_finite(s, "check_automorphism");

    AutCheckResult<Scalar> r;
    const Matrix<Scalar> plain = s;
    const auto [mu, left] = detail::congruence_defect<Scalar>(plain);
    const Scalar right = detail::congruence_defect<Scalar>(plain.transpose(), mu).second;

    const Scalar scale = std::max(Scalar(1), plain.squaredNorm());
    r.mu = mu;
    r.residual_congruence = std::max(left, right) / scale;
    r.cone_forward = plain(0, 0) > 0;
    r.is_automorphism = mu > tol && r.residual_congruence <= tol && r.cone_forward;
    return r;
}

template <typename Scalar = double>
struct Normalized {
    Scalar nu = 1;
    Matrix<Scalar> s_hat;
};

/// nu = sqrt(mu) and S / nu, which satisfies S^T J S = J = S J S^T.
template <typename Derived>
Normalized<typename Derived::Scalar> normalize(
    const Eigen::MatrixBase<Derived>& s, const AutCheckResult<typename Derived::Scalar>& check) {
    if (!check.is_automorphism)
        throw NotAnAutomorphism("normalize: matrix was rejected by the automorphism check");
    Normalized<typename Derived::Scalar> out;
    out.nu = std::sqrt(check.mu);
    out.s_hat = s / out.nu;
    return out;
}

/// nu [[a, c^T], [c, P]] diag(1, U) with a = sqrt(1+|c|^2), P = sqrt(I + c c^T).
template <typename Scalar = double>
struct CompactFactorization {
    Scalar nu = 1;
    Vector<Scalar> c;
    Matrix<Scalar> U;

    Index dim() const { return c.size() + 1; }

    void validate(Scalar tol = kDefaultTol) const {
        if (!(nu > 0) || !std::isfinite(static_cast<double>(nu)))
            throw std::invalid_argument("CompactFactorization: nu must be finite and positive");
        if (c.size() < 1) throw std::invalid_argument("CompactFactorization: c is empty");
        if (U.rows() != c.size() || U.cols() != c.size())
            throw std::invalid_argument("CompactFactorization: U must be " +
                                        std::to_string(c.size()) + "x" + std::to_string(c.size()));
        detail::require_finite(c, "CompactFactorization");
        detail::require_finite(U, "CompactFactorization");
        const Scalar orth = orthogonality_residual(U);
        if (orth > detail::scaled(tol, Scalar(c.size())))
            throw NotAnAutomorphism("CompactFactorization: U is not orthogonal (residual " +
                                    std::to_string(static_cast<double>(orth)) + ")");
    }
};

/// nu diag(1, V) T_alpha diag(1, V^T) diag(1, U).
template <typename Scalar = double>
struct CanonicalFactorization {
    Scalar nu = 1;
    Scalar alpha = 0;
    Matrix<Scalar> V;
    Matrix<Scalar> U;

    Index dim() const { return U.rows() + 1; }

    void validate(Scalar tol = kDefaultTol) const {
        if (!(nu > 0) || !std::isfinite(static_cast<double>(nu)))
            throw std::invalid_argument("CanonicalFactorization: nu must be finite and positive");
        if (!(alpha >= 0) || !std::isfinite(static_cast<double>(alpha)))
            throw std::invalid_argument(
                "CanonicalFactorization: alpha must be finite and non-negative");
        const Index m = U.rows();
        if (m < 1 || U.cols() != m || V.rows() != m || V.cols() != m)
            throw std::invalid_argument("CanonicalFactorization: U and V must be square, same side");
        detail::require_finite(U, "CanonicalFactorization");
        detail::require_finite(V, "CanonicalFactorization");
        const Scalar limit = detail::scaled(tol, Scalar(m));
        if (orthogonality_residual(U) > limit)
            throw NotAnAutomorphism("CanonicalFactorization: U is not orthogonal");
        if (orthogonality_residual(V) > limit)
            throw NotAnAutomorphism("CanonicalFactorization: V is not orthogonal");
    }
};

namespace detail {

template <typename Scalar, typename Derived>
Matrix<Scalar> border_with_one(const Eigen::MatrixBase<Derived>& block) {
    const Index m = block.rows();
    Matrix<Scalar> out = Matrix<Scalar>::Zero(m + 1, m + 1);
    out(0, 0) = Scalar(1);
    out.bottomRightCorner(m, m) = block;
    return out;
}

inline std::string rejection_reason(double mu, double residual, bool forward) {
    if (!forward) return "maps the cone into its negative ((S e)_0 <= 0)";
    if (!(mu > 0)) return "congruence scale mu = " + std::to_string(mu) + " is not positive";
    return "S^T J S is not a multiple of J (scaled residual " + std::to_string(residual) + ")";
}

}  // namespace detail

/// diag(1, D) for orthogonal D: the automorphisms of the algebra itself.
template <typename Derived>
Matrix<typename Derived::Scalar> algebra_automorphism(const Eigen::MatrixBase<Derived>& d,
                                                      typename Derived::Scalar tol = kDefaultTol) {
    using Scalar = typename Derived::Scalar;
    detail::require_square(d, "algebra_automorphism");
    detail::require_finite(d, "algebra_automorphism");
    if (d.rows() < 1) throw std::invalid_argument("algebra_automorphism: empty block");
    if (orthogonality_residual(d) > detail::scaled(tol, Scalar(d.rows())))
        throw std::invalid_argument("algebra_automorphism: block is not orthogonal");
    return detail::border_with_one<Scalar>(d);
}

template <typename Derived>
CompactFactorization<typename Derived::Scalar> factor_compact(
    const Eigen::MatrixBase<Derived>& s, typename Derived::Scalar tol = kDefaultTol) {
    using Scalar = typename Derived::Scalar;
    const auto check = check_automorphism(s, tol);
    if (!check.is_automorphism)
        throw NotAnAutomorphism(
            "factor: not a cone automorphism: " +
            detail::rejection_reason(check.mu, check.residual_congruence, check.cone_forward));
    const auto [nu, s_hat] = normalize(s, check);
    const Index m = s_hat.rows() - 1;

    CompactFactorization<Scalar> f;
    f.nu = nu;
    f.c = s_hat.col(0).tail(m);
    // D = P U, so U = P^{-1} D as a rank-one update of D.
    f.U = RankOneSqrt<Scalar>(f.c).inverse_times(s_hat.bottomRightCorner(m, m));
    const Scalar orth = orthogonality_residual(f.U);
    if (orth > detail::scaled(tol, Scalar(m)))
        throw NotAnAutomorphism("factor: inconsistent input, recovered U has orthogonality residual " +
                                std::to_string(static_cast<double>(orth)));
    return f;
}

template <typename Derived>
CanonicalFactorization<typename Derived::Scalar> factor_canonical(
    const Eigen::MatrixBase<Derived>& s, typename Derived::Scalar tol = kDefaultTol) {
    auto compact = factor_compact(s, tol);
    CanonicalFactorization<typename Derived::Scalar> f;
    f.nu = compact.nu;
    f.alpha = compact.c.stableNorm();
    f.V = householder_to_direction(compact.c);
    f.U = std::move(compact.U);
    return f;
}

template <typename Scalar>
Matrix<Scalar> compose_compact(const CompactFactorization<Scalar>& f,
                               Scalar tol = Scalar(kDefaultTol)) {
    f.validate(tol);
    const Index m = f.c.size();
    const RankOneSqrt<Scalar> p(f.c);
    Matrix<Scalar> s(m + 1, m + 1);
    s(0, 0) = p.a;
    s.row(0).tail(m) = f.c.transpose() * f.U;
    s.col(0).tail(m) = f.c;
    s.bottomRightCorner(m, m) = p.times(f.U);
    s *= f.nu;
    return s;
}

/// Evaluated as the literal product of the four factors.
template <typename Scalar>
Matrix<Scalar> compose_canonical(const CanonicalFactorization<Scalar>& f,
                                 Scalar tol = Scalar(kDefaultTol)) {
    f.validate(tol);
    const Index n = f.dim();
    const Matrix<Scalar> rotate = detail::border_with_one<Scalar>(f.V);
    const Matrix<Scalar> unrotate = detail::border_with_one<Scalar>(f.V.transpose());
    const Matrix<Scalar> orth = detail::border_with_one<Scalar>(f.U);
    const Matrix<Scalar> boost = boost_matrix<Scalar>(f.alpha, n);
    Matrix<Scalar> s = rotate * boost;
    s = (s * unrotate).eval();
    s = (s * orth).eval();
    s *= f.nu;
    return s;
}

/// Random member of Aut(L^n_+): nu ~ U[nu_min, nu_max], alpha ~ U[0, alpha_max],
/// V and U Haar. Deterministic in the seed.
template <typename Scalar = double>
Matrix<Scalar> sample_automorphism(Index n, Scalar alpha_max, Scalar nu_min, Scalar nu_max,
                                   std::uint64_t seed) {
    detail::require_dim(n, "sample_automorphism");
    if (!(alpha_max >= 0) || !std::isfinite(static_cast<double>(alpha_max)))
        throw std::invalid_argument("sample_automorphism: alpha_max must be finite and >= 0");
    if (!(nu_min > 0) || !(nu_min <= nu_max) || !std::isfinite(static_cast<double>(nu_max)))
        throw std::invalid_argument("sample_automorphism: need 0 < nu_min <= nu_max");
    Rng rng(mix_seed(seed, 0));
    CanonicalFactorization<Scalar> f;
    f.nu = nu_min == nu_max ? nu_min : static_cast<Scalar>(rng.uniform(nu_min, nu_max));
    f.alpha = static_cast<Scalar>(alpha_max * rng.uniform01());
    f.V = sample_haar_orthogonal<Scalar>(n - 1, mix_seed(seed, 1));
    f.U = sample_haar_orthogonal<Scalar>(n - 1, mix_seed(seed, 2));
    return compose_canonical(f);
}

/// (1/mu) J S^T J, the inverse of a member with congruence scale mu.
template <typename Derived>
Matrix<typename Derived::Scalar> congruence_inverse(const Eigen::MatrixBase<Derived>& s,
                                                    typename Derived::Scalar mu) {
    using Scalar = typename Derived::Scalar;
    detail::require_square(s, "congruence_inverse");
    detail::require_dim(s.rows(), "congruence_inverse");
    if (!(mu > 0)) throw std::invalid_argument("congruence_inverse: mu must be positive");
    Matrix<Scalar> inv = s.transpose() / mu;
    inv.row(0).tail(inv.cols() - 1) *= Scalar(-1);
    inv.col(0).tail(inv.rows() - 1) *= Scalar(-1);
    return inv;
}

template <typename Derived>
SpinVector<typename Derived::Scalar> apply(const Eigen::MatrixBase<Derived>& s,
                                           const SpinVector<typename Derived::Scalar>& x) {
    if (s.cols() != x.dim() || s.rows() < 2)
        throw std::invalid_argument("apply: matrix is " + std::to_string(s.rows()) + "x" +
                                    std::to_string(s.cols()) + ", vector has dimension " +
                                    std::to_string(x.dim()));
    return SpinVector<typename Derived::Scalar>::from_flat(s * x.flat());
}

template <typename Scalar = double>
struct PropertyReport {
    Scalar nu = 1;
    Scalar residual_A1 = 0;
    Scalar residual_A2 = 0;
    Scalar residual_A3 = 0;
    Scalar residual_B1 = 0;
    Scalar residual_B2 = 0;
    Scalar residual_B3 = 0;
    /// max over interior samples x of max(0, |(Sx)bar| - (Sx)_0) / max(1, |Sx|).
    Scalar cone_violation_max = 0;
    /// max over boundary samples x of ||(Sx)bar| - (Sx)_0| / max(1, |Sx|).
    Scalar boundary_drift_max = 0;
    std::int64_t samples = 0;

    Scalar max_identity_residual() const {
        return std::max({residual_A1, residual_A2, residual_A3, residual_B1, residual_B2,
                         residual_B3});
    }

    bool within(Scalar tol) const {
        return max_identity_residual() <= tol && cone_violation_max <= tol &&
               boundary_drift_max <= tol;
    }
};


/// Residuals of A1-A3 and B1-B3 after normalizing S, plus the images of
/// `n_samples` interior and `n_samples` boundary cone points.
///
/// The scale is the least-squares fit mu = <S^T J S, J>_F / n. Reading it from
/// entry (0, 0) instead would make A1 hold by construction. Matrices the
/// congruence test rejects still get their residuals reported, as long as
/// mu > 0 and (S e)_0 > 0.
template <typename Derived>
PropertyReport<typename Derived::Scalar> property_report(const Eigen::MatrixBase<Derived>& s,
                                                         std::int64_t n_samples,
                                                         typename Derived::Scalar tol,
                                                         std::uint64_t seed) {
    using Scalar = typename Derived::Scalar;
    if (n_samples < 0) throw std::invalid_argument("property_report: negative sample count");
    if (!(tol >= 0)) throw std::invalid_argument("property_report: tol must be non-negative");
    detail::require_square(s, "property_report");
    detail::require_dim(s.rows(), "property_report");
    detail::require_finite(s, "property_report");

    const Index n = s.rows();
    const Matrix<Scalar> plain = s;
    // <S^T J S, J> = sum_ij J_ii J_jj S_ij^2
    Matrix<Scalar> signs = Matrix<Scalar>::Ones(n, n);
    signs.row(0).tail(n - 1).array() = Scalar(-1);
    signs.col(0).tail(n - 1).array() = Scalar(-1);
    const Scalar mu = plain.cwiseAbs2().cwiseProduct(signs).sum() / Scalar(n);
    if (!(mu > 0) || !(plain(0, 0) > 0))
        throw NotAnAutomorphism("property_report: cannot normalize: " +
                                detail::rejection_reason(mu, 0, plain(0, 0) > 0));

    PropertyReport<Scalar> rep;
    rep.nu = std::sqrt(mu);
    const Matrix<Scalar> s_hat = plain / rep.nu;
    const auto blk = split_blocks(s_hat);
    const Index m = blk.D.rows();
    const Matrix<Scalar> eye = Matrix<Scalar>::Identity(m, m);

    // Every residual is measured against max(1, |S_hat|_F).
    const Scalar scale = std::max(Scalar(1), s_hat.norm());
    rep.residual_A1 = std::abs(blk.a - std::hypot(Scalar(1), blk.c.norm())) / scale;
    rep.residual_A2 = (blk.a * blk.b - blk.D.transpose() * blk.c).norm() / scale;
    rep.residual_A3 = (blk.D.transpose() * blk.D - eye - blk.b * blk.b.transpose()).norm() / scale;
    rep.residual_B1 = std::abs(blk.a - std::hypot(Scalar(1), blk.b.norm())) / scale;
    rep.residual_B2 = (blk.a * blk.c - blk.D * blk.b).norm() / scale;
    rep.residual_B3 = (blk.D * blk.D.transpose() - eye - blk.c * blk.c.transpose()).norm() / scale;

    Rng rng(seed);
    Vector<Scalar> x(m + 1);
    rep.samples = n_samples;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        for (Index k = 1; k <= m; ++k) x(k) = static_cast<Scalar>(rng.normal());
        const Scalar len = x.tail(m).norm();
        if (len == Scalar(0)) x(1) = Scalar(1);
        const Scalar radius = static_cast<Scalar>(10.0 * rng.uniform01_open_low());
        x.tail(m) *= radius / x.tail(m).norm();

        x(0) = radius;
        Vector<Scalar> y = s_hat * x;
        Scalar gap = y.tail(m).norm() - y(0);
        rep.boundary_drift_max = std::max(rep.boundary_drift_max,
                                          std::abs(gap) / std::max(Scalar(1), y.norm()));

        x(0) = radius * (Scalar(1) + static_cast<Scalar>(rng.uniform01_open_low()));
        y = s_hat * x;
        gap = y.tail(m).norm() - y(0);
        rep.cone_violation_max = std::max(rep.cone_violation_max,
                                          std::max(Scalar(0), gap) / std::max(Scalar(1), y.norm()));
    }
    return rep;
}

}  // namespace lorentz
