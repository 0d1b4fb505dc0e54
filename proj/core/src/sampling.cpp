#include "flab/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace flab {

namespace {

constexpr std::uint32_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t i, std::uint32_t base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0;
    while (i) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

}  // namespace

Region Region::box(ComplexBox b) {
    Region r;
    r.kind_ = Kind::Box;
    r.n_ = b.n();
    for (const auto& iv : b.coords)
        if (!(iv.re_lo <= iv.re_hi && iv.im_lo <= iv.im_hi)) throw std::invalid_argument("empty box interval");
    r.box_ = std::move(b);
    return r;
}

Region Region::ball(std::vector<cplx> center, double radius) { return annulus(std::move(center), 0.0, radius); }

Region Region::annulus(std::vector<cplx> center, double r_inner, double r_outer) {
    if (!(r_outer > 0) || r_inner < 0 || r_inner > r_outer) throw std::invalid_argument("invalid ball radii");
    Region r;
    r.kind_ = r_inner > 0 ? Kind::Annulus : Kind::Ball;
    r.n_ = center.size();
    r.r_inner_ = r_inner;
    r.r_outer_ = r_outer;
    r.box_.coords.reserve(center.size());
    for (auto c : center)
        r.box_.coords.push_back({c.real() - r_outer, c.real() + r_outer, c.imag() - r_outer, c.imag() + r_outer});
    r.center_ = std::move(center);
    return r;
}

double distance(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double s = 0;
    for (std::size_t k = 0; k < x.size(); ++k) s += std::norm(x[k] - y[k]);
    return std::sqrt(s);
}

bool Region::contains(const std::vector<cplx>& z) const {
    if (z.size() != n_) return false;
    if (kind_ == Kind::Box) {
        for (std::size_t k = 0; k < n_; ++k) {
            const auto& iv = box_.coords[k];
            if (z[k].real() < iv.re_lo || z[k].real() > iv.re_hi || z[k].imag() < iv.im_lo || z[k].imag() > iv.im_hi)
                return false;
        }
        return true;
    }
    double d = distance(z, center_);
    return d >= r_inner_ && d <= r_outer_;
}

std::vector<double> halton_point(std::uint64_t index, std::size_t dims) {
    if (dims > std::size(kPrimes)) throw std::invalid_argument("Halton sampler supports at most 16 dimensions");
    std::vector<double> u(dims);
    for (std::size_t d = 0; d < dims; ++d) u[d] = radical_inverse(index, kPrimes[d]);
    return u;
}

std::vector<std::vector<cplx>> sample_region(const Region& region, std::size_t count, std::uint64_t seed) {
    const std::size_t n = region.n();
    const std::size_t dims = 2 * n;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> shift(dims);
    for (auto& s : shift) s = unif(rng);

    const auto& coords = region.complex_box().coords;
    std::vector<std::vector<cplx>> out;
    out.reserve(count);
    const std::uint64_t max_draws = static_cast<std::uint64_t>(count) * 100000 + 1000;
    std::vector<cplx> z(n);
    for (std::uint64_t i = 1; out.size() < count; ++i) {
        if (i > max_draws) throw std::runtime_error("region sampling stalled (region too thin)");
        auto u = halton_point(i, dims);
        for (std::size_t k = 0; k < n; ++k) {
            double ur = std::fmod(u[k] + shift[k], 1.0);
            double ui = std::fmod(u[n + k] + shift[n + k], 1.0);
            const auto& iv = coords[k];
            z[k] = {iv.re_lo + (iv.re_hi - iv.re_lo) * ur, iv.im_lo + (iv.im_hi - iv.im_lo) * ui};
        }
        if (region.contains(z)) out.push_back(z);
    }
    return out;
}

}  // namespace flab
