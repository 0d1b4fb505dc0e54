#pragma once
//
// Pointwise symplectic / complex linear algebra on R^{2n} = C^n.
//
// Real coordinates are ordered (x_1..x_n, y_1..y_n) with z_k = x_k + i y_k.
// A covector (a, b) acts on a real tangent vector v <-> w = x + i y by
// c(v) = sum a_k w_k + b_k conj(w_k), a real-linear map R^{2n} -> C.
//

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "flab/forms.hpp"

namespace flab {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexRow = Eigen::RowVectorXcd;

inline constexpr double kDefaultRankTol = 1e-9;

class SymplecticFrame {
public:
    // Standard omega_0 = sum dx_k ^ dy_k with J_0.
    static SymplecticFrame standard(std::size_t n);
    // omega_0 with J = P J_0 P^{-1}, P = exp(scale * Omega^{-1} S) for a random
    // symmetric S of unit spectral norm. Compatible with omega_0 by construction.
    static SymplecticFrame perturbed(std::size_t n, double scale, std::uint64_t seed);
    // omega_0 with a caller-supplied J; validates J^2 = -I and compatibility.
    static SymplecticFrame with_complex_structure(std::size_t n, const RealMatrix& J);

    std::size_t n() const { return n_; }
    const RealMatrix& omega() const { return omega_; }
    const RealMatrix& J() const { return J_; }
    const RealMatrix& metric() const { return g_; }
    bool is_standard() const { return standard_; }

private:
    SymplecticFrame(std::size_t n, RealMatrix omega, RealMatrix J, bool standard);

    std::size_t n_;
    RealMatrix omega_;
    RealMatrix J_;
    RealMatrix g_;
    RealMatrix g_inv_;
    bool standard_;

    friend double covector_norm(const Covector& c, const SymplecticFrame& frame);
};

// Row of complex values c(e_j) on the real basis e_1..e_{2n}.
ComplexRow covector_row(const Covector& c);
Covector covector_from_row(const ComplexRow& row);

// Metric norm induced by g; equals Covector::norm() for the standard frame.
double covector_norm(const Covector& c, const SymplecticFrame& frame);

struct CovectorSplit {
    Covector c10;
    Covector c01;
};

// c10 = (c - i c.J)/2, c01 = (c + i c.J)/2.
CovectorSplit split_covector(const Covector& c, const SymplecticFrame& frame);

// 2n x 2n complex matrix P with (a,b)-coefficients of c10 = P * (a,b).
ComplexMatrix split_projector(const SymplecticFrame& frame);

class Subspace {
public:
    // Orthonormalizes the column span of `spanning` (rank by kDefaultRankTol).
    explicit Subspace(const RealMatrix& spanning, double rank_tol = kDefaultRankTol);
    static Subspace from_orthonormal(RealMatrix basis);
    static Subspace full(std::size_t ambient_dim);

    std::size_t ambient_dim() const { return static_cast<std::size_t>(basis_.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }
    const RealMatrix& basis() const { return basis_; }
    Subspace orthogonal_complement(double rank_tol = kDefaultRankTol) const;
    Subspace transformed(const RealMatrix& map) const;

private:
    Subspace() = default;
    RealMatrix basis_;
};

struct KernelCheck {
    bool criterion = false;  // |c01| < |c10|
    std::size_t kernel_dim = 0;
    std::size_t omega_rank = 0;
    bool symplectic = false;  // kernel has codimension 2 and omega is nondegenerate on it
    double norm10 = 0;
    double norm01 = 0;
};

// Real kernel of c: R^{2n} -> R^2 (throws std::invalid_argument on c = 0).
Subspace real_kernel(const Covector& c, double rank_tol = kDefaultRankTol);
KernelCheck kernel_symplectic_check(const Covector& c, const SymplecticFrame& frame,
                                    double rank_tol = kDefaultRankTol);

enum class AngleMode { Max, MinTransversal };

// Max: largest principal angle, arccos of the smallest singular value of V^T U
// (pi/2 when dim U > dim V). MinTransversal: arcsin of
// min_{xi in V^perp, |xi|=1} |P_U xi|, which is 0 when U + V is not the ambient
// space and pi/2 when V is the ambient space.
double subspace_angle(const Subspace& U, const Subspace& V, AngleMode mode);

// Smallest singular value of a real matrix restricted to min(rows, cols) values.
double sigma_min(const RealMatrix& m);
std::size_t numerical_rank(const RealMatrix& m, double tol = kDefaultRankTol);
std::size_t numerical_rank(const ComplexMatrix& m, double tol = kDefaultRankTol);

}  // namespace flab
