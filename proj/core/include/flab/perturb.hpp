#pragma once
//
// Local normalization of a foliation h df near a nondegenerate critical point:
// Hessian model H, bump blend towards H, verification of
// |alpha_{1,0}| > |alpha_{0,1}|, and Takagi reduction of H to (1/2) sum w_i^2.
//
// Blend, with beta = 1 on B(center, c) and beta = 0 outside B(center, 3c/2):
//
//   f_hat     = beta H + (1 - beta) f
//   h_tilde   = beta + (1 - beta) h
//   alpha_hat = h_tilde d f_hat
//             = h_tilde (beta dH + (1 - beta) df + (H - f) d beta)
//
// so alpha_hat = dH = sum a_ij z_i dz_j inside radius c and h df outside 3c/2.
//

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flab/geometry.hpp"

namespace flab {

// A scalar function of z in C^n: either an exact polynomial in (z, zbar) or a
// callable differentiated by finite differences.
class ScalarField {
public:
    using Fn = std::function<cplx(const std::vector<cplx>&)>;

    ScalarField() = default;
    ScalarField(std::size_t n, const Poly& p);  // p in n or 2n variables
    ScalarField(std::size_t n, Fn fn);
    static ScalarField constant(std::size_t n, cplx value);

    std::size_t n() const { return n_; }
    bool is_polynomial() const { return poly_.has_value(); }
    const std::optional<Poly>& poly() const { return poly_; }

    cplx operator()(const std::vector<cplx>& z) const;
    // Wirtinger gradients (d/dz_k, d/dzbar_k).
    void gradient(const std::vector<cplx>& z, std::vector<cplx>& dz, std::vector<cplx>& dzbar) const;
    // d^2 f / dz_i dz_j (holomorphic second derivatives).
    ComplexMatrix holomorphic_hessian(const std::vector<cplx>& z) const;
    // True when some coefficient depends on zbar (polynomial fields only).
    bool has_antiholomorphic_dependence() const;

private:
    std::size_t n_ = 0;
    std::optional<Poly> poly_;
    std::shared_ptr<const FloatPoly> value_;
    std::shared_ptr<const std::vector<FloatPoly>> grad_;       // 2n partials
    std::shared_ptr<const std::vector<FloatPoly>> hessian_;    // n*n partials
    Fn fn_;
};

class DegenerateHessian : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct LocalData {
    std::vector<cplx> center;
    double c = 0.1;
    ScalarField f;
    ScalarField h;
    double h_min = 1.0;
    double h_max = 1.0;
    double kappa = 0.0;

    std::size_t n() const { return center.size(); }

    // f = f_holo + kappa * noise, with all polynomials in original coordinates.
    static LocalData from_polys(std::vector<cplx> center, double c, const Poly& f_holo, const Poly& noise,
                                double kappa, const Poly& h, double h_min, double h_max);

    // Throws std::invalid_argument when an invariant fails: f(center) = 0,
    // del f(center) = 0, 0 < h_min <= |h| <= h_max on sampled points of B(center, 2c).
    void validate(std::size_t h_samples = 256) const;
};

struct HessianModel {
    ComplexMatrix A;
    double asymmetry = 0;  // ||A - A^T|| before symmetrization
    std::vector<std::string> notes;
    // H(z) = (1/2) (z - center)^T A (z - center)
    cplx H(const std::vector<cplx>& center, const std::vector<cplx>& z) const;
};

// Throws std::invalid_argument when the Hessian is unsymmetric beyond 1e-6.
HessianModel hessian_model(const LocalData& L);

double bump(double c, double r);
double bump_derivative(double c, double r);  // d beta / d r

struct Takagi {
    ComplexMatrix U;
    Eigen::VectorXd sigma;  // nonincreasing, >= 0
    // w = Sigma^{1/2} U^T z
    Eigen::VectorXcd coordinates(const Eigen::VectorXcd& z) const;
    ComplexMatrix reconstruct() const;
};

// A = U diag(sigma) U^T for complex symmetric A (throws on asymmetry > 1e-9 ||A||).
Takagi takagi_reduce(const ComplexMatrix& A);

class BlendedForm {
public:
    struct State;
    BlendedForm() = default;
    explicit BlendedForm(std::shared_ptr<const State> s) : s_(std::move(s)) {}

    Covector operator()(const std::vector<cplx>& z) const;
    // beta H + (1 - beta) f
    cplx potential(const std::vector<cplx>& z) const;
    // The unperturbed h df.
    Covector input(const std::vector<cplx>& z) const;

private:
    std::shared_ptr<const State> s_;
};

struct KeyInequalityStats {
    std::size_t samples_per_region = 0;
    double inner_pass_fraction = 0;    // B(c) minus B(1e-3 c)
    double annulus_pass_fraction = 0;  // c <= |z| <= 2c
    double inner_min_margin = 0;
    double annulus_min_margin = 0;
    double min_margin = 0;
    double min_relative_margin = 0;  // min of margin / |z - center|
    bool passed() const { return inner_pass_fraction == 1.0 && annulus_pass_fraction == 1.0; }
};

struct PerturbationResult {
    BlendedForm alpha_hat;
    std::vector<cplx> center;
    double c = 0;
    HessianModel hessian;
    double hessian_sigma_min = 0;
    Takagi takagi;
    std::optional<KeyInequalityStats> verification;
    std::vector<std::string> notes;
};

inline constexpr double kDefaultEpsPrime = 1e-3;

// Throws DegenerateHessian when sigma_min(A) <= eps_prime.
PerturbationResult blend_perturbation(const LocalData& L, double eps_prime = kDefaultEpsPrime);

KeyInequalityStats verify_key_inequality(const PerturbationResult& R, const SymplecticFrame& frame,
                                         std::size_t samples, std::uint64_t seed);

// Largest |d beta / dr| * c over a fine grid of the transition band.
double measured_bump_slope(std::size_t grid = 100001);

}  // namespace flab
