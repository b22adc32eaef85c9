#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "phasefn/simd/kernels.hpp"

using namespace phasefn::simd;

namespace {

struct Inputs {
    std::vector<cplx> a, b;
    std::vector<double> m, r;
};

Inputs make_inputs(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 3.0);
    Inputs in;
    for (std::size_t k = 0; k < n; ++k) {
        in.a.emplace_back(nd(rng), nd(rng));
        in.b.emplace_back(nd(rng), nd(rng));
        in.m.push_back(nd(rng));
        in.r.push_back(nd(rng));
    }
    return in;
}

bool same_bits(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    for (std::size_t k = 0; k < x.size(); ++k)
        if (std::signbit(x[k].real()) != std::signbit(y[k].real()) || x[k] != y[k]) return false;
    return true;
}

}  // namespace

TEST_CASE("scalar table is always available") {
    CHECK(isa_available(Isa::scalar));
    CHECK(table_for(Isa::scalar).isa == Isa::scalar);
}

TEST_CASE("avx2 kernels match the scalar reference") {
    if (!isa_available(Isa::avx2)) {
        MESSAGE("AVX2 not available; skipping equivalence");
        return;
    }
    const KernelTable& s = table_for(Isa::scalar);
    const KernelTable& v = table_for(Isa::avx2);
    for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 7u, 16u, 33u, 1024u, 4099u}) {
        CAPTURE(n);
        const Inputs in = make_inputs(n, 17 + n);

        const double sa = s.sum_abs(in.a.data(), n), va = v.sum_abs(in.a.data(), n);
        CHECK(std::abs(sa - va) <= 4e-16 * n * (sa + 1));
        const double sd = s.sum_abs_diff(in.a.data(), in.b.data(), n);
        const double vd = v.sum_abs_diff(in.a.data(), in.b.data(), n);
        CHECK(std::abs(sd - vd) <= 4e-16 * n * (sd + 1));
        CHECK(s.max_abs(in.r.data(), n) == v.max_abs(in.r.data(), n));

        std::vector<cplx> o1(n), o2(n);
        s.mul_real(o1.data(), in.a.data(), in.m.data(), n);
        v.mul_real(o2.data(), in.a.data(), in.m.data(), n);
        CHECK(same_bits(o1, o2));

        s.mul_imag(o1.data(), in.a.data(), in.m.data(), n);
        v.mul_imag(o2.data(), in.a.data(), in.m.data(), n);
        CHECK(same_bits(o1, o2));

        o1 = in.a;
        o2 = in.a;
        s.alternate_scale(o1.data(), 0.37, n);
        v.alternate_scale(o2.data(), 0.37, n);
        CHECK(same_bits(o1, o2));

        std::vector<double> p1(n), p2(n);
        s.mul_pointwise(p1.data(), in.m.data(), in.r.data(), n);
        v.mul_pointwise(p2.data(), in.m.data(), in.r.data(), n);
        CHECK(p1 == p2);
    }
}

TEST_CASE("kernel semantics") {
    const KernelTable& t = active();
    std::vector<cplx> a{{3, 4}, {0, -2}, {1, 0}};
    CHECK(t.sum_abs(a.data(), 3) == doctest::Approx(8.0));
    std::vector<double> m{2, 3, -1};
    std::vector<cplx> o(3);
    t.mul_imag(o.data(), a.data(), m.data(), 3);
    CHECK(o[0] == cplx(-8, 6));
    CHECK(o[1] == cplx(6, 0));
    t.alternate_scale(a.data(), 2.0, 3);
    CHECK(a[1] == cplx(0, 4));
    CHECK(a[2] == cplx(2, 0));
    std::vector<double> r{-5, 2, 4.5};
    CHECK(t.max_abs(r.data(), 3) == 5.0);
}

TEST_CASE("set_isa switches the active table") {
    const Isa before = active_isa();
    set_isa(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);
    if (isa_available(Isa::avx2)) {
        set_isa(Isa::avx2);
        CHECK(active_isa() == Isa::avx2);
    }
    set_isa(before);
}
