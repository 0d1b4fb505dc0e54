#include "flab/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flab/parallel.hpp"
#include "flab/sampling.hpp"

namespace flab {

namespace {

constexpr double kGradientStep = 1e-5;
constexpr double kHessianStep = 1e-4;

std::vector<cplx> with_conjugates(const std::vector<cplx>& z) {
    std::vector<cplx> p(2 * z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        p[k] = z[k];
        p[z.size() + k] = std::conj(z[k]);
    }
    return p;
}

// Real coordinate a in 0..2n-1: x_k for a < n, y_{a-n} otherwise.
std::vector<cplx> moved(const std::vector<cplx>& z, std::size_t a, double h) {
    auto w = z;
    const std::size_t n = z.size();
    if (a < n)
        w[a] += h;
    else
        w[a - n] += cplx(0, h);
    return w;
}

double q_of(double t) {
    if (t <= 0) return 0;
    if (t >= 1) return 1;
    double e0 = std::exp(-1.0 / t);
    double e1 = std::exp(-1.0 / (1.0 - t));
    return e0 / (e0 + e1);
}

double dq_of(double t) {
    if (t <= 0 || t >= 1) return 0;
    double e0 = std::exp(-1.0 / t);
    double e1 = std::exp(-1.0 / (1.0 - t));
    double d0 = e0 / (t * t);
    double d1 = e1 / ((1.0 - t) * (1.0 - t));
    double s = e0 + e1;
    return (d0 * e1 + e0 * d1) / (s * s);
}

}  // namespace

ScalarField::ScalarField(std::size_t n, const Poly& p) : n_(n) {
    if (p.n_vars() != n && p.n_vars() != 2 * n) throw DimensionMismatch("scalar field has wrong variable count");
    Poly full = p.n_vars() == n ? p.embed(2 * n) : p;
    poly_ = full;
    value_ = std::make_shared<const FloatPoly>(full);
    std::vector<FloatPoly> grad;
    std::vector<Poly> first;
    for (std::size_t j = 0; j < 2 * n; ++j) {
        first.push_back(full.differentiate(j));
        grad.emplace_back(first.back());
    }
    grad_ = std::make_shared<const std::vector<FloatPoly>>(std::move(grad));
    std::vector<FloatPoly> hess;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) hess.emplace_back(first[i].differentiate(j));
    hessian_ = std::make_shared<const std::vector<FloatPoly>>(std::move(hess));
}

ScalarField::ScalarField(std::size_t n, Fn fn) : n_(n), fn_(std::move(fn)) {
    if (!fn_) throw std::invalid_argument("empty scalar field callable");
}

ScalarField ScalarField::constant(std::size_t n, cplx value) {
    return ScalarField(n, Poly::constant(n, RationalComplex::from_double(value.real(), value.imag())));
}

cplx ScalarField::operator()(const std::vector<cplx>& z) const {
    if (z.size() != n_) throw DimensionMismatch("point dimension mismatch");
    if (value_) return (*value_)(with_conjugates(z));
    return fn_(z);
}

void ScalarField::gradient(const std::vector<cplx>& z, std::vector<cplx>& dz, std::vector<cplx>& dzbar) const {
    if (z.size() != n_) throw DimensionMismatch("point dimension mismatch");
    dz.assign(n_, 0.0);
    dzbar.assign(n_, 0.0);
    if (grad_) {
        auto p = with_conjugates(z);
        for (std::size_t k = 0; k < n_; ++k) {
            dz[k] = (*grad_)[k](p);
            dzbar[k] = (*grad_)[n_ + k](p);
        }
        return;
    }
    auto central = [&](std::size_t a, double h) { return (fn_(moved(z, a, h)) - fn_(moved(z, a, -h))) / (2 * h); };
    auto partial = [&](std::size_t a) {
        cplx d1 = central(a, kGradientStep);
        cplx d2 = central(a, kGradientStep / 2);
        if (std::abs(d1 - d2) > 1e-6 * std::max(1.0, std::abs(d2))) return (4.0 * d2 - d1) / 3.0;
        return d2;
    };
    const cplx I(0, 1);
    for (std::size_t k = 0; k < n_; ++k) {
        cplx fx = partial(k);
        cplx fy = partial(n_ + k);
        dz[k] = 0.5 * (fx - I * fy);
        dzbar[k] = 0.5 * (fx + I * fy);
    }
}

ComplexMatrix ScalarField::holomorphic_hessian(const std::vector<cplx>& z) const {
    if (z.size() != n_) throw DimensionMismatch("point dimension mismatch");
    ComplexMatrix A(n_, n_);
    if (hessian_) {
        auto p = with_conjugates(z);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) A(i, j) = (*hessian_)[i * n_ + j](p);
        return A;
    }
    const double h = kHessianStep;
    auto second = [&](std::size_t a, std::size_t b) {
        auto pp = fn_(moved(moved(z, a, h), b, h));
        auto pm = fn_(moved(moved(z, a, h), b, -h));
        auto mp = fn_(moved(moved(z, a, -h), b, h));
        auto mm = fn_(moved(moved(z, a, -h), b, -h));
        return (pp - pm - mp + mm) / (4 * h * h);
    };
    const cplx I(0, 1);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            cplx xx = second(i, j), yy = second(n_ + i, n_ + j);
            cplx xy = second(i, n_ + j), yx = second(n_ + i, j);
            A(i, j) = 0.25 * (xx - yy - I * (xy + yx));
        }
    return A;
}

bool ScalarField::has_antiholomorphic_dependence() const {
    if (!poly_) return false;
    for (std::size_t k = n_; k < 2 * n_; ++k)
        if (poly_->depends_on(k)) return true;
    return false;
}

LocalData LocalData::from_polys(std::vector<cplx> center, double c, const Poly& f_holo, const Poly& noise,
                                double kappa, const Poly& h, double h_min, double h_max) {
    const std::size_t n = center.size();
    auto lift = [n](const Poly& p) {
        if (p.n_vars() != n && p.n_vars() != 2 * n) throw DimensionMismatch("local data polynomial has wrong variable count");
        return p.n_vars() == n ? p.embed(2 * n) : p;
    };
    Poly f = lift(f_holo);
    if (kappa != 0.0) f += lift(noise).scaled(RationalComplex::from_double(kappa));
    LocalData L;
    L.center = std::move(center);
    L.c = c;
    L.f = ScalarField(n, f);
    L.h = ScalarField(n, lift(h));
    L.h_min = h_min;
    L.h_max = h_max;
    L.kappa = kappa;
    return L;
}

void LocalData::validate(std::size_t h_samples) const {
    const std::size_t n = center.size();
    if (n == 0) throw std::invalid_argument("local data needs a center");
    if (f.n() != n || h.n() != n) throw DimensionMismatch("local data fields disagree with center dimension");
    if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("radius c must be positive");
    if (!(h_min > 0)) throw std::invalid_argument("h_min must be positive");
    if (!(h_max >= h_min)) throw std::invalid_argument("h_max must be at least h_min");
    const double tol_value = f.is_polynomial() ? 1e-9 : 1e-7;
    const double tol_grad = f.is_polynomial() ? 1e-9 : 1e-6;
    if (std::abs(f(center)) > tol_value) throw std::invalid_argument("f does not vanish at the center");
    std::vector<cplx> dz, dzbar;
    f.gradient(center, dz, dzbar);
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(dz[k]) > tol_grad || std::abs(dzbar[k]) > tol_grad)
            throw std::invalid_argument("center is not a critical point of f");
    auto check_h = [&](const std::vector<cplx>& z) {
        double m = std::abs(h(z));
        if (m < h_min * (1 - 1e-12) || m > h_max * (1 + 1e-12))
            throw std::invalid_argument("|h| leaves [h_min, h_max] on B(center, 2c)");
    };
    check_h(center);
    for (const auto& z : sample_region(Region::ball(center, 2 * c), h_samples, 0)) check_h(z);
}

cplx HessianModel::H(const std::vector<cplx>& center, const std::vector<cplx>& z) const {
    const auto n = static_cast<Eigen::Index>(center.size());
    Eigen::VectorXcd d(n);
    for (Eigen::Index k = 0; k < n; ++k) d(k) = z[k] - center[k];
    return 0.5 * (d.transpose() * A * d)(0, 0);
}

HessianModel hessian_model(const LocalData& L) {
    HessianModel M;
    ComplexMatrix A = L.f.holomorphic_hessian(L.center);
    M.asymmetry = (A - A.transpose()).cwiseAbs().maxCoeff();
    if (M.asymmetry > 1e-6) throw std::invalid_argument("Hessian of f is not symmetric");
    M.A = 0.5 * (A + A.transpose());
    if (L.f.has_antiholomorphic_dependence())
        M.notes.push_back("f depends on zbar; the model keeps only the holomorphic second derivatives");
    return M;
}

double bump(double c, double r) {
    if (r <= c) return 1.0;
    if (r >= 1.5 * c) return 0.0;
    return q_of((1.5 * c - r) / (0.5 * c));
}

double bump_derivative(double c, double r) {
    if (r <= c || r >= 1.5 * c) return 0.0;
    return -dq_of((1.5 * c - r) / (0.5 * c)) * 2.0 / c;
}

double measured_bump_slope(std::size_t grid) {
    if (grid < 2) throw std::invalid_argument("bump slope grid needs at least two points");
    double best = 0;
    for (std::size_t i = 0; i < grid; ++i) {
        double r = 1.0 + 0.5 * static_cast<double>(i) / static_cast<double>(grid - 1);
        best = std::max(best, std::abs(bump_derivative(1.0, r)));
    }
    return best;
}

Eigen::VectorXcd Takagi::coordinates(const Eigen::VectorXcd& z) const {
    return sigma.cwiseSqrt().asDiagonal() * (U.transpose() * z);
}

ComplexMatrix Takagi::reconstruct() const { return U * sigma.cast<cplx>().asDiagonal() * U.transpose(); }

Takagi takagi_reduce(const ComplexMatrix& A) {
    if (A.rows() != A.cols() || A.rows() == 0) throw DimensionMismatch("Takagi reduction needs a square matrix");
    const Eigen::Index n = A.rows();
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw std::invalid_argument("Takagi reduction needs a symmetric matrix");
    RealMatrix B = A.real(), C = A.imag();
    RealMatrix M(2 * n, 2 * n);
    M << B, C, C, -B;
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(M);
    const double zero_tol = 1e-12 * scale * static_cast<double>(n);

    Takagi T;
    T.U = ComplexMatrix::Zero(n, n);
    T.sigma = Eigen::VectorXd::Zero(n);
    Eigen::Index filled = 0;
    for (Eigen::Index k = 2 * n - 1; k >= 0 && filled < n; --k) {
        double s = es.eigenvalues()(k);
        if (s <= zero_tol) break;
        RealVector v = es.eigenvectors().col(k);
        Eigen::VectorXcd u(n);
        for (Eigen::Index j = 0; j < n; ++j) u(j) = cplx(v(j), v(n + j));
        T.U.col(filled) = u.normalized();
        T.sigma(filled) = s;
        ++filled;
    }
    if (filled < n) {
        // Null directions: any unitary completion works since sigma = 0 there.
        ComplexMatrix basis(n, filled + n);
        basis << T.U.leftCols(filled), ComplexMatrix::Identity(n, n);
        Eigen::HouseholderQR<ComplexMatrix> qr(basis);
        ComplexMatrix Q = qr.householderQ() * ComplexMatrix::Identity(n, n);
        T.U.rightCols(n - filled) = Q.rightCols(n - filled);
    }
    return T;
}

struct BlendedForm::State {
    std::vector<cplx> center;
    double c = 0;
    ComplexMatrix A;
    ScalarField f;
    ScalarField h;
};

namespace {

Eigen::VectorXcd offset(const std::vector<cplx>& z, const std::vector<cplx>& center, double& r) {
    if (z.size() != center.size()) throw DimensionMismatch("point dimension mismatch");
    Eigen::VectorXcd d(static_cast<Eigen::Index>(z.size()));
    for (std::size_t k = 0; k < z.size(); ++k) d(static_cast<Eigen::Index>(k)) = z[k] - center[k];
    r = d.norm();
    return d;
}

}  // namespace

Covector BlendedForm::input(const std::vector<cplx>& z) const {
    std::vector<cplx> dz, dzbar;
    s_->f.gradient(z, dz, dzbar);
    cplx hv = s_->h(z);
    for (auto& v : dz) v *= hv;
    for (auto& v : dzbar) v *= hv;
    return Covector(std::move(dz), std::move(dzbar));
}

cplx BlendedForm::potential(const std::vector<cplx>& z) const {
    double r = 0;
    auto d = offset(z, s_->center, r);
    const double c = s_->c;
    if (r >= 1.5 * c) return s_->f(z);
    cplx H = 0.5 * (d.transpose() * s_->A * d)(0, 0);
    if (r <= c) return H;
    double beta = bump(c, r);
    return beta * H + (1.0 - beta) * s_->f(z);
}

Covector BlendedForm::operator()(const std::vector<cplx>& z) const {
    double r = 0;
    auto d = offset(z, s_->center, r);
    const double c = s_->c;
    const std::size_t n = z.size();
    if (r >= 1.5 * c) return input(z);
    Eigen::VectorXcd dH = s_->A * d;
    if (r <= c) {
        Covector out(n);
        for (std::size_t k = 0; k < n; ++k) out.a[k] = dH(static_cast<Eigen::Index>(k));
        return out;
    }
    double beta = bump(c, r);
    double dbeta = bump_derivative(c, r);
    cplx H = 0.5 * (d.transpose() * dH)(0, 0);
    cplx fv = s_->f(z);
    std::vector<cplx> dz, dzbar;
    s_->f.gradient(z, dz, dzbar);
    cplx htilde = beta + (1.0 - beta) * s_->h(z);
    Covector out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx dk = d(static_cast<Eigen::Index>(k));
        cplx dr_dz = std::conj(dk) / (2 * r);
        cplx dr_dzbar = dk / (2 * r);
        out.a[k] = htilde * (beta * dH(static_cast<Eigen::Index>(k)) + (1.0 - beta) * dz[k] + (H - fv) * dbeta * dr_dz);
        out.b[k] = htilde * ((1.0 - beta) * dzbar[k] + (H - fv) * dbeta * dr_dzbar);
    }
    return out;
}

PerturbationResult blend_perturbation(const LocalData& L, double eps_prime) {
    L.validate();
    PerturbationResult R;
    R.hessian = hessian_model(L);
    R.notes = R.hessian.notes;
    Eigen::JacobiSVD<ComplexMatrix> svd(R.hessian.A);
    R.hessian_sigma_min = svd.singularValues().minCoeff();
    if (!(R.hessian_sigma_min > eps_prime))
        throw DegenerateHessian("Hessian is degenerate: sigma_min = " + std::to_string(R.hessian_sigma_min) +
                                " <= " + std::to_string(eps_prime));
    R.takagi = takagi_reduce(R.hessian.A);
    R.center = L.center;
    R.c = L.c;
    auto state = std::make_shared<BlendedForm::State>();
    state->center = L.center;
    state->c = L.c;
    state->A = R.hessian.A;
    state->f = L.f;
    state->h = L.h;
    R.alpha_hat = BlendedForm(std::move(state));
    return R;
}

KeyInequalityStats verify_key_inequality(const PerturbationResult& R, const SymplecticFrame& frame,
                                         std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("key inequality check needs samples");
    if (frame.n() != R.center.size()) throw DimensionMismatch("frame dimension mismatch");
    KeyInequalityStats st;
    st.samples_per_region = samples;
    double min_rel = std::numeric_limits<double>::infinity();

    auto run = [&](const Region& region, std::uint64_t s, double& fraction, double& min_margin) {
        auto pts = sample_region(region, samples, s);
        std::vector<double> margin(pts.size()), rel(pts.size());
        parallel_for(pts.size(), [&](std::size_t i) {
            auto sp = split_covector(R.alpha_hat(pts[i]), frame);
            margin[i] = covector_norm(sp.c10, frame) - covector_norm(sp.c01, frame);
            rel[i] = margin[i] / distance(pts[i], R.center);
        });
        std::size_t pass = 0;
        min_margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (margin[i] > 0) ++pass;
            min_margin = std::min(min_margin, margin[i]);
            min_rel = std::min(min_rel, rel[i]);
        }
        fraction = static_cast<double>(pass) / static_cast<double>(pts.size());
    };
    run(Region::annulus(R.center, 1e-3 * R.c, R.c), seed, st.inner_pass_fraction, st.inner_min_margin);
    run(Region::annulus(R.center, R.c, 2 * R.c), seed + 1, st.annulus_pass_fraction, st.annulus_min_margin);
    st.min_margin = std::min(st.inner_min_margin, st.annulus_min_margin);
    st.min_relative_margin = min_rel;
    return st;
}

}  // namespace flab
