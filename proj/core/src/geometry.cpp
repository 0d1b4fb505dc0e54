#include "flab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace flab {

namespace {

RealMatrix standard_omega(std::size_t n) {
    const auto m = static_cast<Eigen::Index>(n);
    RealMatrix omega = RealMatrix::Zero(2 * m, 2 * m);
    omega.topRightCorner(m, m).setIdentity();
    omega.bottomLeftCorner(m, m) = -RealMatrix::Identity(m, m);
    return omega;
}

RealMatrix standard_J(std::size_t n) {
    const auto m = static_cast<Eigen::Index>(n);
    RealMatrix J = RealMatrix::Zero(2 * m, 2 * m);
    J.topRightCorner(m, m) = -RealMatrix::Identity(m, m);
    J.bottomLeftCorner(m, m).setIdentity();
    return J;
}

// R = (a, b) * T as row vectors.
ComplexMatrix ab_to_row(std::size_t n) {
    const auto m = static_cast<Eigen::Index>(n);
    const std::complex<double> I(0, 1);
    ComplexMatrix T = ComplexMatrix::Zero(2 * m, 2 * m);
    for (Eigen::Index k = 0; k < m; ++k) {
        T(k, k) = 1;          // a_k -> R_x
        T(k, m + k) = I;      // a_k -> R_y
        T(m + k, k) = 1;      // b_k -> R_x
        T(m + k, m + k) = -I; // b_k -> R_y
    }
    return T;
}

}  // namespace

SymplecticFrame::SymplecticFrame(std::size_t n, RealMatrix omega, RealMatrix J, bool standard)
    : n_(n), omega_(std::move(omega)), J_(std::move(J)), standard_(standard) {
    const auto d = static_cast<Eigen::Index>(2 * n);
    if (J_.rows() != d || J_.cols() != d) throw DimensionMismatch("complex structure has wrong size");
    const double scale = std::max(1.0, J_.norm());
    if ((J_ * J_ + RealMatrix::Identity(d, d)).norm() > 1e-10 * scale * scale)
        throw std::invalid_argument("J is not a complex structure (J^2 != -I)");
    if ((J_.transpose() * omega_ * J_ - omega_).norm() > 1e-10 * scale * scale)
        throw std::invalid_argument("J does not preserve omega");
    g_ = omega_ * J_;
    if ((g_ - g_.transpose()).norm() > 1e-10 * scale)
        throw std::invalid_argument("omega(., J.) is not symmetric");
    g_ = 0.5 * (g_ + g_.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(g_);
    if (es.eigenvalues().minCoeff() <= 0) throw std::invalid_argument("omega(., J.) is not positive definite");
    g_inv_ = g_.inverse();
}

SymplecticFrame SymplecticFrame::standard(std::size_t n) {
    if (n == 0) throw std::invalid_argument("frame needs n >= 1");
    return SymplecticFrame(n, standard_omega(n), standard_J(n), true);
}

SymplecticFrame SymplecticFrame::perturbed(std::size_t n, double scale, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("frame needs n >= 1");
    if (scale == 0.0) return standard(n);
    const auto d = static_cast<Eigen::Index>(2 * n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    RealMatrix S(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) S(i, j) = S(j, i) = normal(rng);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(S);
    S /= es.eigenvalues().cwiseAbs().maxCoeff();
    RealMatrix omega = standard_omega(n);
    RealMatrix X = scale * omega.inverse() * S;
    RealMatrix P = X.exp();
    RealMatrix J = P * standard_J(n) * P.inverse();
    return SymplecticFrame(n, std::move(omega), std::move(J), false);
}

SymplecticFrame SymplecticFrame::with_complex_structure(std::size_t n, const RealMatrix& J) {
    bool standard = J.rows() == static_cast<Eigen::Index>(2 * n) && J.cols() == J.rows() &&
                    (J - standard_J(n)).norm() == 0.0;
    return SymplecticFrame(n, standard_omega(n), J, standard);
}

ComplexRow covector_row(const Covector& c) {
    const std::size_t n = c.n();
    Eigen::VectorXcd ab(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        ab(static_cast<Eigen::Index>(k)) = c.a[k];
        ab(static_cast<Eigen::Index>(n + k)) = c.b[k];
    }
    return ab.transpose() * ab_to_row(n);
}

Covector covector_from_row(const ComplexRow& row) {
    const std::size_t n = static_cast<std::size_t>(row.size()) / 2;
    const std::complex<double> I(0, 1);
    Covector c(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto rx = row(static_cast<Eigen::Index>(k));
        auto ry = row(static_cast<Eigen::Index>(n + k));
        c.a[k] = 0.5 * (rx - I * ry);
        c.b[k] = 0.5 * (rx + I * ry);
    }
    return c;
}

double covector_norm(const Covector& c, const SymplecticFrame& frame) {
    if (c.n() != frame.n()) throw DimensionMismatch("covector and frame dimensions differ");
    if (frame.standard_) return c.norm();
    ComplexRow R = covector_row(c);
    RealMatrix P = R.real();
    RealMatrix Q = R.imag();
    double s = (P * frame.g_inv_ * P.transpose())(0, 0) + (Q * frame.g_inv_ * Q.transpose())(0, 0);
    return std::sqrt(std::max(0.0, 0.5 * s));
}

CovectorSplit split_covector(const Covector& c, const SymplecticFrame& frame) {
    if (c.n() != frame.n()) throw DimensionMismatch("covector and frame dimensions differ");
    if (frame.is_standard()) {
        Covector c10(c.a, std::vector<cplx>(c.n(), 0.0));
        Covector c01(std::vector<cplx>(c.n(), 0.0), c.b);
        return {std::move(c10), std::move(c01)};
    }
    const std::complex<double> I(0, 1);
    ComplexRow R = covector_row(c);
    ComplexRow RJ = R * frame.J().cast<std::complex<double>>();
    return {covector_from_row(0.5 * (R - I * RJ)), covector_from_row(0.5 * (R + I * RJ))};
}

ComplexMatrix split_projector(const SymplecticFrame& frame) {
    const std::size_t n = frame.n();
    const auto d = static_cast<Eigen::Index>(2 * n);
    const std::complex<double> I(0, 1);
    ComplexMatrix T = ab_to_row(n);
    ComplexMatrix M = 0.5 * (ComplexMatrix::Identity(d, d) - I * frame.J().cast<std::complex<double>>());
    return (T * M * T.inverse()).transpose();
}

Subspace::Subspace(const RealMatrix& spanning, double rank_tol) {
    if (spanning.cols() == 0) {
        basis_ = RealMatrix(spanning.rows(), 0);
        return;
    }
    Eigen::JacobiSVD<RealMatrix> svd(spanning, Eigen::ComputeThinU);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > rank_tol) ++r;
    basis_ = svd.matrixU().leftCols(r);
}

Subspace Subspace::from_orthonormal(RealMatrix basis) {
    const auto k = basis.cols();
    if ((basis.transpose() * basis - RealMatrix::Identity(k, k)).norm() > 1e-12)
        throw std::invalid_argument("basis is not orthonormal to 1e-12");
    Subspace s;
    s.basis_ = std::move(basis);
    return s;
}

Subspace Subspace::full(std::size_t ambient_dim) {
    Subspace s;
    const auto d = static_cast<Eigen::Index>(ambient_dim);
    s.basis_ = RealMatrix::Identity(d, d);
    return s;
}

Subspace Subspace::orthogonal_complement(double rank_tol) const {
    const auto d = basis_.rows();
    Subspace s;
    if (basis_.cols() == 0) {
        s.basis_ = RealMatrix::Identity(d, d);
        return s;
    }
    Eigen::JacobiSVD<RealMatrix> svd(basis_, Eigen::ComputeFullU);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > rank_tol) ++r;
    s.basis_ = svd.matrixU().rightCols(d - r);
    return s;
}

Subspace Subspace::transformed(const RealMatrix& map) const { return Subspace(map * basis_); }

Subspace real_kernel(const Covector& c, double rank_tol) {
    if (c.norm() == 0.0) throw std::invalid_argument("kernel of the zero covector is requested");
    ComplexRow R = covector_row(c);
    const auto d = R.size();
    RealMatrix A(2, d);
    A.row(0) = R.real();
    A.row(1) = R.imag();
    Eigen::JacobiSVD<RealMatrix> svd(A, Eigen::ComputeFullV);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > rank_tol) ++r;
    return Subspace::from_orthonormal(svd.matrixV().rightCols(d - r));
}

KernelCheck kernel_symplectic_check(const Covector& c, const SymplecticFrame& frame, double rank_tol) {
    if (c.n() != frame.n()) throw DimensionMismatch("covector and frame dimensions differ");
    if (c.norm() == 0.0) throw std::invalid_argument("kernel_symplectic_check on the zero covector");
    KernelCheck out;
    auto [c10, c01] = split_covector(c, frame);
    out.norm10 = covector_norm(c10, frame);
    out.norm01 = covector_norm(c01, frame);
    out.criterion = out.norm01 < out.norm10;

    Subspace K = real_kernel(c, rank_tol);
    out.kernel_dim = K.dim();
    if (K.dim() > 0) {
        RealMatrix restricted = K.basis().transpose() * frame.omega() * K.basis();
        out.omega_rank = numerical_rank(restricted, rank_tol);
    }
    out.symplectic = out.kernel_dim == 2 * frame.n() - 2 && out.omega_rank == out.kernel_dim;
    return out;
}

double sigma_min(const RealMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<RealMatrix> svd(m);
    return svd.singularValues().minCoeff();
}

std::size_t numerical_rank(const RealMatrix& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<RealMatrix> svd(m);
    return static_cast<std::size_t>((svd.singularValues().array() > tol).count());
}

std::size_t numerical_rank(const ComplexMatrix& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return static_cast<std::size_t>((svd.singularValues().array() > tol).count());
}

double subspace_angle(const Subspace& U, const Subspace& V, AngleMode mode) {
    if (U.ambient_dim() != V.ambient_dim()) throw DimensionMismatch("subspaces live in different spaces");
    constexpr double half_pi = std::numbers::pi / 2;

    if (mode == AngleMode::Max) {
        if (U.dim() == 0) return 0.0;
        if (U.dim() > V.dim()) return half_pi;
        // Small angles via the sine (residual of U off V), large via the cosine.
        RealMatrix residual = U.basis() - V.basis() * (V.basis().transpose() * U.basis());
        Eigen::JacobiSVD<RealMatrix> rs(residual);
        double s = std::min(1.0, rs.singularValues().maxCoeff());
        if (s < std::sqrt(0.5)) return std::asin(s);
        Eigen::JacobiSVD<RealMatrix> cs(RealMatrix(V.basis().transpose() * U.basis()));
        return std::acos(std::clamp(cs.singularValues().minCoeff(), 0.0, 1.0));
    }

    Subspace N = V.orthogonal_complement();
    if (N.dim() == 0) return half_pi;
    if (N.dim() > U.dim()) return 0.0;
    // The unit normal minimising its U-component maximises its U-orthogonal residual,
    // so atan2 of the two extreme singular values stays well conditioned near pi/2.
    RealMatrix M = U.basis().transpose() * N.basis();
    RealMatrix residual = N.basis() - U.basis() * M;
    Eigen::JacobiSVD<RealMatrix> on(M);
    Eigen::JacobiSVD<RealMatrix> off(residual);
    return std::atan2(on.singularValues().minCoeff(), off.singularValues().maxCoeff());
}

}  // namespace flab
