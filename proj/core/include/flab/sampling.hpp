#pragma once
//
// Deterministic low-discrepancy sampling of regions in C^n.
//
// Points come from a Halton sequence in the 2n real coordinates with a
// Cranley-Patterson rotation drawn from the seed, restricted to the region by
// rejection. The first k points of a request for N >= k samples are the same
// k points, so larger sample counts refine smaller ones.
//

#include <cstddef>
#include <cstdint>
#include <vector>

#include "flab/foliation.hpp"

namespace flab {

class Region {
public:
    enum class Kind { Box, Ball, Annulus };

    static Region box(ComplexBox b);
    static Region ball(std::vector<cplx> center, double radius);
    // r_inner <= |z - center| <= r_outer
    static Region annulus(std::vector<cplx> center, double r_inner, double r_outer);

    Kind kind() const { return kind_; }
    std::size_t n() const { return n_; }
    const std::vector<cplx>& center() const { return center_; }
    double r_inner() const { return r_inner_; }
    double r_outer() const { return r_outer_; }
    const ComplexBox& complex_box() const { return box_; }

    bool contains(const std::vector<cplx>& z) const;

private:
    Kind kind_ = Kind::Box;
    std::size_t n_ = 0;
    ComplexBox box_;
    std::vector<cplx> center_;
    double r_inner_ = 0;
    double r_outer_ = 0;
};

// Radical-inverse Halton point with index i >= 0 in `dims` dimensions (<= 16).
std::vector<double> halton_point(std::uint64_t index, std::size_t dims);

// `count` points of `region`; throws std::runtime_error if rejection stalls.
std::vector<std::vector<cplx>> sample_region(const Region& region, std::size_t count, std::uint64_t seed);

double distance(const std::vector<cplx>& x, const std::vector<cplx>& y);

}  // namespace flab
