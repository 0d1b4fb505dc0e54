#include "flab/holonomy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace flab {

Word parse_word(const std::string& text) {
    Word w;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*')) ++i;
    };
    skip();
    while (i < text.size()) {
        std::size_t start = i;
        while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
        if (i == start) throw std::invalid_argument("bad word syntax near '" + text.substr(start) + "'");
        Letter l{text.substr(start, i - start), 1};
        if (i < text.size() && text[i] == '^') {
            ++i;
            if (text.compare(i, 2, "-1") == 0) {
                l.power = -1;
                i += 2;
            } else if (text.compare(i, 1, "1") == 0) {
                i += 1;
            } else {
                throw std::invalid_argument("word exponents must be 1 or -1");
            }
        }
        w.push_back(std::move(l));
        skip();
    }
    return w;
}

std::string word_to_string(const Word& w) {
    std::string s;
    for (const auto& l : w) {
        if (!s.empty()) s += ' ';
        s += l.generator;
        if (l.power < 0) s += "^-1";
    }
    return s;
}

Word inverse(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (auto& l : r) l.power = -l.power;
    return r;
}

bool is_su2(const Mat2& m, double tol) {
    if (!m.allFinite()) return false;
    double unitary = (m.adjoint() * m - Mat2::Identity()).cwiseAbs().maxCoeff();
    return unitary <= tol && std::abs(m.determinant() - cplx(1.0)) <= tol;
}

Mat2 su2_diagonal(double theta) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::polar(1.0, theta);
    m(1, 1) = std::polar(1.0, -theta);
    return m;
}

Mat2 su2_from_quaternion(double a, double b, double c, double d) {
    double r = std::sqrt(a * a + b * b + c * c + d * d);
    if (!(r > 0)) throw std::invalid_argument("zero quaternion");
    a /= r, b /= r, c /= r, d /= r;
    Mat2 m;
    m << cplx(a, b), cplx(c, d), cplx(-c, d), cplx(a, -b);
    return m;
}

bool is_plus_minus_identity(const Mat2& m, double tol) {
    return (m - Mat2::Identity()).cwiseAbs().maxCoeff() <= tol || (m + Mat2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

Representation::Representation(std::vector<std::string> generators, std::map<std::string, Mat2> images,
                               std::vector<Word> relations)
    : generators_(std::move(generators)), images_(std::move(images)), relations_(std::move(relations)) {
    std::set<std::string> seen;
    for (const auto& g : generators_) {
        if (!seen.insert(g).second) throw std::invalid_argument("duplicate generator '" + g + "'");
        auto it = images_.find(g);
        if (it == images_.end()) throw std::invalid_argument("generator '" + g + "' has no image");
        if (!is_su2(it->second)) throw std::invalid_argument("image of '" + g + "' is not in SU(2)");
    }
    for (const auto& [name, m] : images_)
        if (!seen.count(name)) throw std::invalid_argument("image given for undeclared generator '" + name + "'");
    for (const auto& r : relations_)
        if (!is_plus_minus_identity(image(r)))
            throw std::invalid_argument("relation '" + word_to_string(r) + "' does not map to +-I");
}

Representation Representation::trivial(std::vector<std::string> generators) {
    std::map<std::string, Mat2> images;
    for (const auto& g : generators) images[g] = Mat2::Identity();
    return Representation(std::move(generators), std::move(images));
}

Mat2 Representation::image(const Word& w) const {
    Mat2 m = Mat2::Identity();
    for (const auto& l : w) {
        auto it = images_.find(l.generator);
        if (it == images_.end()) throw UnknownGenerator("unknown generator '" + l.generator + "'");
        m = m * (l.power < 0 ? Mat2(it->second.adjoint()) : it->second);
    }
    return m;
}

PencilParameter::PencilParameter(cplx z1, cplx z2) {
    double r = std::hypot(std::abs(z1), std::abs(z2));
    if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("pencil parameter needs a nonzero finite pair");
    z_ = {z1 / r, z2 / r};
}

PencilParameter PencilParameter::affine(cplx lambda) { return PencilParameter(1.0, lambda); }

std::optional<cplx> PencilParameter::affine_value(double tol) const {
    if (std::abs(z_[0]) <= tol) return std::nullopt;
    return z_[1] / z_[0];
}

double chordal_distance(const PencilParameter& u, const PencilParameter& v) {
    // For unit vectors in C^2, 1 - |<u,v>|^2 = |det[u v]|^2; the determinant avoids cancellation.
    return std::min(1.0, std::abs(u.z1() * v.z2() - u.z2() * v.z1()));
}

PencilParameter act(const Mat2& m, const PencilParameter& lam) {
    return PencilParameter(m(0, 0) * lam.z1() + m(0, 1) * lam.z2(), m(1, 0) * lam.z1() + m(1, 1) * lam.z2());
}

PencilParameter holonomy_eval(const Representation& rho, const Word& word, const PencilParameter& lam) {
    return act(rho.image(word), lam);
}

PU2Triviality pu2_triviality(const Representation& rho, const std::vector<Word>& words) {
    if (words.empty()) throw std::invalid_argument("PU(2) test needs a nonempty word sample");
    PU2Triviality out;
    for (const auto& w : words) {
        if (!is_plus_minus_identity(rho.image(w))) {
            out.trivial_in_pu2 = false;
            out.witness = w;
            break;
        }
    }
    return out;
}

PencilParameter twist_local_pencil(const SU2Field& psi, const std::vector<cplx>& p) {
    if (p.size() < 2) throw std::invalid_argument("pencil point needs at least two coordinates");
    if (p[0] == cplx(0) && p[1] == cplx(0)) throw std::domain_error("point lies on the base locus");
    Mat2 m = psi(p);
    if (!is_su2(m, 1e-9)) throw std::invalid_argument("twist value is not in SU(2)");
    return act(m, PencilParameter(p[0], p[1]));
}

OrbitProbe orbit_probe(const Mat2& g, const PencilParameter& lam, std::size_t steps, double threshold) {
    OrbitProbe probe;
    probe.steps = steps;
    probe.min_return_distance = std::numeric_limits<double>::infinity();
    PencilParameter cur = lam;
    for (std::size_t k = 1; k <= steps; ++k) {
        cur = act(g, cur);
        double d = chordal_distance(cur, lam);
        probe.min_return_distance = std::min(probe.min_return_distance, d);
        if (!probe.first_return && d < threshold) probe.first_return = k;
    }
    return probe;
}

}  // namespace flab
