#include "flab/transversality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "flab/parallel.hpp"

namespace flab {

namespace {

constexpr cplx kI{0.0, 1.0};

std::vector<cplx> doubled(const std::vector<cplx>& z) {
    std::vector<cplx> full(z);
    for (auto x : z) full.push_back(std::conj(x));
    return full;
}

// Values and derivatives along the 2n real directions of polynomial
// components in (z, zbar).
struct PolyMapKernel {
    std::size_t n = 0;
    std::vector<FloatPoly> value;
    std::vector<std::vector<FloatPoly>> dz;     // [component][k]
    std::vector<std::vector<FloatPoly>> dzbar;  // [component][k]

    PolyMapKernel(const std::vector<Poly>& comps, std::size_t n_) : n(n_) {
        for (const auto& c : comps) {
            Poly p = c.n_vars() == n ? c.embed(2 * n) : c;
            if (p.n_vars() != 2 * n) throw DimensionMismatch("map component has the wrong variable count");
            value.emplace_back(p);
            dz.emplace_back();
            dzbar.emplace_back();
            for (std::size_t k = 0; k < n; ++k) {
                dz.back().emplace_back(p.differentiate(k));
                dzbar.back().emplace_back(p.differentiate(n + k));
            }
        }
    }

    std::vector<cplx> eval(const std::vector<cplx>& z) const {
        auto full = doubled(z);
        std::vector<cplx> out;
        out.reserve(value.size());
        for (const auto& v : value) out.push_back(v(full));
        return out;
    }

    // Complex derivative columns: D[i][k] along x_k, D[i][n+k] along y_k.
    ComplexMatrix directional(const std::vector<cplx>& z) const {
        auto full = doubled(z);
        const auto m = static_cast<Eigen::Index>(value.size());
        ComplexMatrix D(m, static_cast<Eigen::Index>(2 * n));
        for (Eigen::Index i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                cplx a = dz[static_cast<std::size_t>(i)][k](full);
                cplx b = dzbar[static_cast<std::size_t>(i)][k](full);
                D(i, static_cast<Eigen::Index>(k)) = a + b;
                D(i, static_cast<Eigen::Index>(n + k)) = kI * (a - b);
            }
        }
        return D;
    }
};

RealMatrix realify(const ComplexMatrix& D) {
    RealMatrix J(2 * D.rows(), D.cols());
    J.topRows(D.rows()) = D.real();
    J.bottomRows(D.rows()) = D.imag();
    return J;
}

double vec_norm(const std::vector<cplx>& v) {
    double s = 0;
    for (auto x : v) s += std::norm(x);
    return std::sqrt(s);
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

SampledMap::SampledMap(std::size_t n, std::size_t m, Region domain, Eval eval, std::optional<Jacobian> jacobian)
    : n_(n), m_(m), domain_(std::move(domain)), eval_(std::move(eval)), jacobian_(std::move(jacobian)) {
    if (domain_.n() != n_) throw DimensionMismatch("sampled map domain dimension mismatch");
}

SampledMap SampledMap::polynomial(const std::vector<Poly>& components, Region domain) {
    if (components.empty()) throw std::invalid_argument("map needs at least one component");
    const std::size_t n = domain.n();
    auto kernel = std::make_shared<PolyMapKernel>(components, n);
    return SampledMap(
        n, components.size(), std::move(domain), [kernel](const std::vector<cplx>& z) { return kernel->eval(z); },
        [kernel](const std::vector<cplx>& z) { return realify(kernel->directional(z)); });
}

SampledMap SampledMap::one_zero_part(const PolyForm& alpha, const SymplecticFrame& frame, Region domain) {
    if (alpha.degree() != 1) throw std::invalid_argument("one_zero_part needs a 1-form");
    const std::size_t n = alpha.n();
    if (frame.n() != n || domain.n() != n) throw DimensionMismatch("form, frame and domain dimensions differ");
    std::vector<Poly> a, ab;
    for (std::size_t k = 0; k < 2 * n; ++k) {
        Poly c = alpha.coefficient({static_cast<std::uint8_t>(k)});
        if (k < n) a.push_back(c);
        ab.push_back(c);
    }
    if (frame.is_standard()) return polynomial(a, std::move(domain));

    auto kernel = std::make_shared<PolyMapKernel>(ab, n);
    auto P = std::make_shared<ComplexMatrix>(split_projector(frame));
    return SampledMap(
        n, 2 * n, std::move(domain),
        [kernel, P](const std::vector<cplx>& z) {
            auto v = kernel->eval(z);
            Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
            Eigen::VectorXcd y = (*P) * x;
            return std::vector<cplx>(y.data(), y.data() + y.size());
        },
        [kernel, P](const std::vector<cplx>& z) { return realify((*P) * kernel->directional(z)); });
}

RealMatrix SampledMap::finite_difference_jacobian(const std::vector<cplx>& z, double h) const {
    RealMatrix J(static_cast<Eigen::Index>(2 * m_), static_cast<Eigen::Index>(2 * n_));
    std::vector<cplx> zp = z, zm = z;
    for (std::size_t k = 0; k < 2 * n_; ++k) {
        cplx dir = k < n_ ? cplx(h, 0) : cplx(0, h);
        std::size_t idx = k % n_;
        zp[idx] = z[idx] + dir;
        zm[idx] = z[idx] - dir;
        auto vp = eval_(zp);
        auto vm = eval_(zm);
        zp[idx] = zm[idx] = z[idx];
        for (std::size_t i = 0; i < m_; ++i) {
            cplx d = (vp[i] - vm[i]) / (2 * h);
            J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = d.real();
            J(static_cast<Eigen::Index>(m_ + i), static_cast<Eigen::Index>(k)) = d.imag();
        }
    }
    return J;
}

RealMatrix SampledMap::jacobian(const std::vector<cplx>& z) const {
    return jacobian_ ? (*jacobian_)(z) : finite_difference_jacobian(z);
}

SampledMap SampledMap::with_domain(Region domain) const {
    return SampledMap(n_, m_, std::move(domain), eval_, jacobian_);
}

SampledMap SampledMap::shifted(const std::vector<cplx>& w) const {
    if (w.size() != m_) throw DimensionMismatch("shift has the wrong length");
    auto base = eval_;
    return SampledMap(
        n_, m_, domain_,
        [base, w](const std::vector<cplx>& z) {
            auto v = base(z);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= w[i];
            return v;
        },
        jacobian_);
}

double jacobian_cross_check(const SampledMap& s, const std::vector<cplx>& x) {
    RealMatrix a = s.jacobian(x);
    RealMatrix f = s.finite_difference_jacobian(x);
    return (a - f).norm() / std::max(1e-300, std::max(a.norm(), f.norm()));
}

std::vector<SampleRow> sample_map(const SampledMap& s, std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("need at least one sample");
    auto pts = sample_region(s.domain(), samples, seed);
    std::vector<SampleRow> rows(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        rows[i].x = pts[i];
        rows[i].abs_s = vec_norm(s(pts[i]));
        rows[i].sigma_min = sigma_min(s.jacobian(pts[i]));
    });
    return rows;
}

void write_sample_csv(std::ostream& os, const std::vector<SampleRow>& rows) {
    const std::size_t n = rows.empty() ? 0 : rows.front().x.size();
    for (std::size_t k = 0; k < 2 * n; ++k) os << "x" << (k + 1) << ",";
    os << "abs_s,sigma_min\n";
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < n; ++k) os << fmt17(r.x[k].real()) << ",";
        for (std::size_t k = 0; k < n; ++k) os << fmt17(r.x[k].imag()) << ",";
        os << fmt17(r.abs_s) << "," << fmt17(r.sigma_min) << "\n";
    }
}

TransversalityEstimate transversality_estimate(const std::vector<SampleRow>& rows, double eta) {
    if (!(eta > 0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be a positive finite number");
    TransversalityEstimate est;
    est.samples = rows.size();
    for (const auto& r : rows) {
        if (r.abs_s < eta) {
            ++est.hits;
            est.value = std::min(est.value, r.sigma_min);
        }
    }
    return est;
}

TransversalityEstimate transversality_estimate(const SampledMap& s, double eta, std::size_t samples,
                                               std::uint64_t seed) {
    if (!(eta > 0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be a positive finite number");
    return transversality_estimate(sample_map(s, samples, seed), eta);
}

double transversality_level(const std::vector<SampleRow>& rows) {
    double level = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) level = std::min(level, std::max(r.abs_s, r.sigma_min));
    return level;
}

std::vector<BadPoint> bad_set_scan(const CovectorField& alpha, const SymplecticFrame& frame, const Region& region,
                                   std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("need at least one sample");
    auto pts = sample_region(region, samples, seed);
    std::vector<BadPoint> all(pts.size());
    std::vector<char> bad(pts.size(), 0);
    parallel_for(pts.size(), [&](std::size_t i) {
        auto [c10, c01] = split_covector(alpha(pts[i]), frame);
        double n10 = covector_norm(c10, frame);
        double n01 = covector_norm(c01, frame);
        if (n10 <= n01) {
            bad[i] = 1;
            all[i] = {pts[i], n10, n01};
        }
    });
    std::vector<BadPoint> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (bad[i]) out.push_back(std::move(all[i]));
    return out;
}

std::vector<BadPoint> bad_set_scan(const FoliationSpec& F, const SymplecticFrame& frame, const Region& region,
                                   std::size_t samples, std::uint64_t seed) {
    FloatOneForm form(F.alpha);
    return bad_set_scan([&form](const std::vector<cplx>& z) { return form(z); }, frame, region, samples, seed);
}

RegularityReport regularity_report(const FoliationSpec& F, const SymplecticFrame& frame,
                                   const std::vector<std::vector<cplx>>& kupka_points, double gamma,
                                   const Region& region, std::size_t samples, std::uint64_t seed) {
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
    if (frame.n() != F.n || region.n() != F.n) throw DimensionMismatch("foliation, frame and region dimensions differ");
    for (const auto& k : kupka_points)
        if (k.size() != F.n) throw DimensionMismatch("Kupka point dimension mismatch");

    RegularityReport rep;
    rep.gamma = gamma;
    FloatOneForm form(F.alpha);

    // (i) evidence at the designated points.
    PolyForm dalpha = exterior_derivative(F.alpha);
    rep.kupka_margin = kupka_points.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < kupka_points.size(); ++j) {
        PointReport pr = classify_point(F, kupka_points[j]);
        auto M = eval_two_form(dalpha, kupka_points[j]);
        const auto d = static_cast<Eigen::Index>(M.size());
        ComplexMatrix m(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c)
                m(r, c) = M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        Eigen::JacobiSVD<ComplexMatrix> svd(m);
        double s2 = d >= 2 ? svd.singularValues()(1) : 0.0;
        rep.kupka_margin = std::min(rep.kupka_margin, s2);
        rep.notes.push_back("(i) point " + std::to_string(j) + ": " + to_string(pr.cls) + " (rank " +
                            std::to_string(pr.dalpha_rank) + ", |alpha| = " + fmt17(pr.residual) + ")");
    }
    if (kupka_points.empty()) rep.notes.emplace_back("(i) no Kupka points supplied; kupka_margin = 0");

    auto pts = sample_region(region, samples, seed);
    std::vector<char> in_tube(pts.size(), 0);
    std::vector<double> angle(pts.size(), -1.0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (const auto& k : kupka_points) {
            double d = distance(pts[i], k);
            if (d < gamma) in_tube[i] = d > 1e-6 * gamma ? 1 : 2;  // 2: on the point itself
        }
    }

    // (ii) leaf angle inside the tube.
    parallel_for(pts.size(), [&](std::size_t i) {
        if (in_tube[i] != 1) return;
        Covector c = form(pts[i]);
        if (c.norm() <= 1e-12) return;
        Subspace K = real_kernel(c);
        angle[i] = subspace_angle(K, K.transformed(frame.J()), AngleMode::Max);
    });
    std::size_t zeros_in_tube = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (in_tube[i] == 1) {
            ++rep.tube_samples;
            if (angle[i] < 0)
                ++zeros_in_tube;
            else
                rep.leaf_angle_max = std::max(rep.leaf_angle_max, angle[i]);
        }
    }
    if (zeros_in_tube)
        rep.notes.push_back("(ii) " + std::to_string(zeros_in_tube) + " tube samples skipped where alpha vanishes");

    // (iii) transversality of the (1,0)-part outside the tube, plus the bad set there.
    SampledMap s10 = SampledMap::one_zero_part(F.alpha, frame, region);
    std::vector<std::size_t> outer;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!in_tube[i]) outer.push_back(i);
    rep.outer_samples = outer.size();
    std::vector<SampleRow> rows(outer.size());
    std::vector<BadPoint> bad(outer.size());
    std::vector<char> is_bad(outer.size(), 0);
    parallel_for(outer.size(), [&](std::size_t j) {
        const auto& x = pts[outer[j]];
        rows[j].x = x;
        rows[j].abs_s = vec_norm(s10(x));
        rows[j].sigma_min = sigma_min(s10.jacobian(x));
        auto [c10, c01] = split_covector(form(x), frame);
        double n10 = covector_norm(c10, frame), n01 = covector_norm(c01, frame);
        if (n10 <= n01) {
            is_bad[j] = 1;
            bad[j] = {x, n10, n01};
        }
    });
    for (std::size_t j = 0; j < outer.size(); ++j)
        if (is_bad[j]) rep.bad_points.push_back(std::move(bad[j]));
    if (rows.empty()) {
        rep.epsilon = 0.0;
        rep.notes.emplace_back("(iii) no samples outside the gamma-tube; epsilon = 0");
    } else {
        rep.epsilon = transversality_level(rows);
    }

    // (iv) local factorization.
    if (const auto* fac = std::get_if<FactoredProvenance>(&F.provenance)) {
        bool ok = PolyForm::differential(F.n, fac->f).times(fac->h) == F.alpha;
        rep.notes.emplace_back(ok ? "(iv) alpha = h df verified exactly from provenance"
                                  : "(iv) provenance (h, f) does NOT reproduce alpha");
    } else {
        rep.notes.emplace_back("(iv) unverified: provenance '" + provenance_kind(F.provenance) +
                               "' carries no integrating factor (h, f)");
    }
    return rep;
}

ShiftObjective::ShiftObjective(const SampledMap& t, std::size_t samples, std::uint64_t seed)
    : n_(t.n()), m_(t.m()) {
    auto rows = sample_map(t, samples, seed);
    values_.resize(rows.size());
    sigma_.resize(rows.size());
    parallel_for(rows.size(), [&](std::size_t i) { values_[i] = t(rows[i].x); });
    for (std::size_t i = 0; i < rows.size(); ++i) sigma_[i] = rows[i].sigma_min;
}

double ShiftObjective::operator()(const std::vector<cplx>& w) const {
    if (w.size() != m_) throw DimensionMismatch("shift has the wrong length");
    double level = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (sigma_[i] >= level) continue;
        double s = 0;
        for (std::size_t k = 0; k < m_; ++k) s += std::norm(values_[i][k] - w[k]);
        level = std::min(level, std::max(std::sqrt(s), sigma_[i]));
    }
    return level;
}

WSearchResult local_perturbation_search(const SampledMap& t, double delta, const WSearchOptions& opts) {
    if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
    if (t.m() != t.n()) throw DimensionMismatch("w-search needs a map C^n -> C^n");
    const std::size_t n = t.n();
    ShiftObjective objective(t.with_domain(Region::ball(std::vector<cplx>(n, 0.0), 0.9)), opts.samples, opts.seed);

    WSearchResult res;
    auto project = [delta](std::vector<cplx>& w) {
        double r = vec_norm(w);
        if (r > delta) {
            for (auto& x : w) x *= delta / r;
            while (vec_norm(w) > delta)
                for (auto& x : w) x *= 1.0 - 1e-15;
        }
    };

    struct Cand {
        std::vector<cplx> w;
        double value;
    };
    std::vector<Cand> cands;
    cands.push_back({std::vector<cplx>(n, 0.0), 0.0});
    if (opts.candidates > 0) {
        for (auto& w : sample_region(Region::ball(std::vector<cplx>(n, 0.0), delta), opts.candidates, opts.seed + 1)) {
            project(w);
            cands.push_back({std::move(w), 0.0});
        }
    }
    parallel_for(cands.size(), [&](std::size_t i) { cands[i].value = objective(cands[i].w); });
    res.evaluations = cands.size();
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.value > b.value; });

    const std::size_t starts = std::min(std::max<std::size_t>(1, opts.refine_starts), cands.size());
    std::vector<Cand> refined(starts);
    std::vector<char> exhausted(starts, 0);
    std::vector<std::size_t> evals(starts, 0);
    parallel_for(starts, [&](std::size_t s) {
        Cand cur = cands[s];
        double step = delta / 4;
        int it = 0;
        for (; it < opts.refine_iters && step > delta * 1e-6; ++it) {
            bool improved = false;
            for (std::size_t k = 0; k < 2 * n && !improved; ++k) {
                for (double sign : {1.0, -1.0}) {
                    std::vector<cplx> w = cur.w;
                    w[k % n] += k < n ? cplx(sign * step, 0) : cplx(0, sign * step);
                    project(w);
                    double v = objective(w);
                    ++evals[s];
                    if (v > cur.value) {
                        cur = {std::move(w), v};
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) step /= 2;
        }
        exhausted[s] = it >= opts.refine_iters && step > delta * 1e-6;
        refined[s] = std::move(cur);
    });
    std::size_t best = 0;
    for (std::size_t s = 0; s < starts; ++s) {
        res.evaluations += evals[s];
        if (refined[s].value > refined[best].value) best = s;
    }
    res.w = refined[best].w;
    res.achieved = refined[best].value;
    res.budget_exhausted = exhausted[best] != 0;
    return res;
}

}  // namespace flab
