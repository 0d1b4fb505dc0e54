#pragma once
//
// SU(2) representations of finitely presented groups and their action on CP^1.
//
// Words compose left to right as matrices: the image of g_1 g_2 ... g_k is
// rho(g_1) rho(g_2) ... rho(g_k), so the last letter acts first and
// H(w_1 w_2) = H(w_1) o H(w_2).
//

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flab/poly.hpp"

namespace flab {

using Mat2 = Eigen::Matrix2cd;

struct Letter {
    std::string generator;
    int power = 1;  // +1 or -1
    friend bool operator==(const Letter&, const Letter&) = default;
};
using Word = std::vector<Letter>;

// "a b^-1 a" style text; letters are separated by spaces or "*".
Word parse_word(const std::string& text);
std::string word_to_string(const Word& w);
Word inverse(const Word& w);

class UnknownGenerator : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

bool is_su2(const Mat2& m, double tol = 1e-12);
// exp(i theta) on the first diagonal entry, exp(-i theta) on the second.
Mat2 su2_diagonal(double theta);
// Unit quaternion (a, b, c, d) -> [[a + b i, c + d i], [-c + d i, a - b i]].
Mat2 su2_from_quaternion(double a, double b, double c, double d);

class Representation {
public:
    Representation() = default;
    // Throws std::invalid_argument when an image is not in SU(2) to 1e-12 or a
    // relation does not evaluate to +-I to 1e-9.
    Representation(std::vector<std::string> generators, std::map<std::string, Mat2> images,
                   std::vector<Word> relations = {});
    static Representation trivial(std::vector<std::string> generators);

    const std::vector<std::string>& generators() const { return generators_; }
    const std::map<std::string, Mat2>& images() const { return images_; }
    const std::vector<Word>& relations() const { return relations_; }

    // Throws UnknownGenerator.
    Mat2 image(const Word& w) const;

private:
    std::vector<std::string> generators_;
    std::map<std::string, Mat2> images_;
    std::vector<Word> relations_;
};

class PencilParameter {
public:
    // Normalizes (z1, z2) to unit norm; throws std::invalid_argument on (0, 0).
    PencilParameter(cplx z1, cplx z2);
    static PencilParameter affine(cplx lambda);  // [1 : lambda]
    static PencilParameter infinity() { return PencilParameter(0.0, 1.0); }

    cplx z1() const { return z_[0]; }
    cplx z2() const { return z_[1]; }
    // z2 / z1, or nullopt at infinity.
    std::optional<cplx> affine_value(double tol = 1e-300) const;

private:
    std::array<cplx, 2> z_;
};

// Fubini-Study chordal distance sqrt(1 - |<u, v>|^2) on unit representatives.
double chordal_distance(const PencilParameter& u, const PencilParameter& v);

PencilParameter act(const Mat2& m, const PencilParameter& lam);
PencilParameter holonomy_eval(const Representation& rho, const Word& word, const PencilParameter& lam);

struct PU2Triviality {
    bool trivial_in_pu2 = true;
    std::optional<Word> witness;
};

bool is_plus_minus_identity(const Mat2& m, double tol = 1e-9);

// Throws std::invalid_argument on an empty sample.
PU2Triviality pu2_triviality(const Representation& rho, const std::vector<Word>& words);

using SU2Field = std::function<Mat2(const std::vector<cplx>&)>;

// Class of psi(p) (p1, p2) in CP^1. Throws std::domain_error on the base locus
// p1 = p2 = 0 and std::invalid_argument when psi(p) is not in SU(2) to 1e-9.
PencilParameter twist_local_pencil(const SU2Field& psi, const std::vector<cplx>& p);

struct OrbitProbe {
    std::size_t steps = 0;
    double min_return_distance = 0;  // min over k in 1..steps of d(g^k lam, lam)
    std::optional<std::size_t> first_return;  // first k with distance < threshold
};

OrbitProbe orbit_probe(const Mat2& g, const PencilParameter& lam, std::size_t steps, double threshold);

}  // namespace flab
