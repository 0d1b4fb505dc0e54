#include <benchmark/benchmark.h>

#include "flab/foliation.hpp"
#include "flab/perturb.hpp"
#include "flab/transversality.hpp"

using namespace flab;

namespace {

void BM_IntegrabilityPencil(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::string f1 = "z1^2", f2 = "z2^3";
    for (std::size_t k = 3; k <= n; ++k) {
        f1 += " + z" + std::to_string(k) + "*z1";
        f2 += " - z" + std::to_string(k) + "^3";
    }
    auto F = make_pencil(3, 2, parse_poly(f1, n, false), parse_poly(f2, n, false));
    for (auto _ : state) benchmark::DoNotOptimize(check_integrability(F));
}
BENCHMARK(BM_IntegrabilityPencil)->Arg(2)->Arg(3)->Arg(4);

void BM_Logarithmic(benchmark::State& state) {
    std::vector<RationalComplex> lam = {RationalComplex(1), RationalComplex(2), RationalComplex(-3)};
    std::vector<Poly> f = {parse_poly("z1^2 + z2*z3", 3, false), parse_poly("z2^2 - z1*z3", 3, false),
                           parse_poly("z3^2 + z1*z2", 3, false)};
    for (auto _ : state) {
        auto F = make_logarithmic(lam, f);
        benchmark::DoNotOptimize(check_integrability(F));
    }
}
BENCHMARK(BM_Logarithmic);

void BM_WSearch(benchmark::State& state) {
    auto t = SampledMap::polynomial({parse_poly("z1*z2", 2, false), parse_poly("z1^2 - z2^2", 2, false)},
                                    Region::ball({0.0, 0.0}, 1.0));
    WSearchOptions opts;
    opts.samples = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(local_perturbation_search(t, 0.1, opts));
}
BENCHMARK(BM_WSearch)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Takagi(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    ComplexMatrix B = ComplexMatrix::Random(n, n);
    ComplexMatrix A = B + B.transpose();
    for (auto _ : state) benchmark::DoNotOptimize(takagi_reduce(A));
}
BENCHMARK(BM_Takagi)->Arg(2)->Arg(4)->Arg(6);

void BM_KeyInequality(benchmark::State& state) {
    auto L = LocalData::from_polys({0.0, 0.0}, 0.1, parse_poly("z1^2/2 + z1*z2 + z2^2", 2, false),
                                   parse_poly("zbar1^2", 2, true), 0.01, parse_poly("1", 2, false), 1.0, 1.0);
    auto R = blend_perturbation(L);
    auto frame = SymplecticFrame::standard(2);
    for (auto _ : state) benchmark::DoNotOptimize(verify_key_inequality(R, frame, 10000, 0));
}
BENCHMARK(BM_KeyInequality)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
