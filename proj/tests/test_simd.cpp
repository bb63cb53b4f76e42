#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <vector>

#include "corrode/simd/kernels.hpp"

using namespace corrode::simd;

namespace {

// Lengths that exercise the vector body and every tail size.
const std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 63, 1000, 1027};

std::vector<double> uniform(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

class SimdEquivalence : public ::testing::Test {
protected:
    void SetUp() override {
        if (!cpu_has_avx2()) GTEST_SKIP() << "AVX2 not available on this CPU";
    }
    std::mt19937_64 rng{42};
};

}  // namespace

TEST_F(SimdEquivalence, Degradation) {
    const DegradationCoeffs c{127.2, 1.3868, 0.9107};
    for (std::size_t n : kLengths) {
        auto phi = uniform(n, 0.0, 1.0, rng);
        if (n > 2) {
            phi[0] = 0.0;
            phi[1] = 1.0;
        }
        std::vector<double> g1(n), d1(n), g2(n), d2(n);
        scalar_kernels().degradation(phi.data(), n, c, g1.data(), d1.data());
        avx2_kernels().degradation(phi.data(), n, c, g2.data(), d2.data());
        EXPECT_TRUE(bitwise_equal(g1, g2)) << n;
        EXPECT_TRUE(bitwise_equal(d1, d2)) << n;
    }
}

TEST_F(SimdEquivalence, RankineHistory) {
    for (std::size_t n : kLengths) {
        const auto sxx = uniform(n, -8e6, 8e6, rng), syy = uniform(n, -8e6, 8e6, rng), sxy = uniform(n, -4e6, 4e6, rng);
        const auto inv = uniform(n, 1e-11, 2e-11, rng), thr = uniform(n, 50, 300, rng);
        auto h1 = uniform(n, 0, 600, rng);
        auto h2 = h1;
        scalar_kernels().rankine_history(sxx.data(), syy.data(), sxy.data(), inv.data(), thr.data(), n, h1.data());
        avx2_kernels().rankine_history(sxx.data(), syy.data(), sxy.data(), inv.data(), thr.data(), n, h2.data());
        EXPECT_TRUE(bitwise_equal(h1, h2)) << n;
    }
}

TEST_F(SimdEquivalence, PrecipitateUpdate) {
    for (std::size_t n : kLengths) {
        const auto p0 = uniform(n, 0.2, 0.52, rng);
        auto theta = uniform(n, 0.0, 0.2, rng);
        if (n > 1) theta[0] = p0[0];  // clogged entry
        const auto c3 = uniform(n, 0.0, 500.0, rng);
        std::vector<double> o1(n), o2(n);
        scalar_kernels().precipitate_update(theta.data(), c3.data(), p0.data(), n, 5e-4, 1e-6, o1.data());
        avx2_kernels().precipitate_update(theta.data(), c3.data(), p0.data(), n, 5e-4, 1e-6, o2.data());
        EXPECT_TRUE(bitwise_equal(o1, o2)) << n;
    }
}

TEST_F(SimdEquivalence, EffectiveDiffusivity) {
    for (std::size_t n : kLengths) {
        const auto tl = uniform(n, 0.0, 0.52, rng), phi = uniform(n, 0.0, 1.0, rng);
        std::vector<double> o1(n), o2(n);
        scalar_kernels().effective_diffusivity(tl.data(), phi.data(), n, 3.8e-11, 7e-10, o1.data());
        avx2_kernels().effective_diffusivity(tl.data(), phi.data(), n, 3.8e-11, 7e-10, o2.data());
        EXPECT_TRUE(bitwise_equal(o1, o2)) << n;
    }
}

TEST_F(SimdEquivalence, ReactionRates) {
    for (std::size_t n : kLengths) {
        const auto c2 = uniform(n, 0.0, 1000.0, rng), c3 = uniform(n, 0.0, 500.0, rng);
        std::vector<double> a1(n), b1(n), p1(n), a2(n), b2(n), p2(n);
        scalar_kernels().reaction_rates(c2.data(), c3.data(), n, 0.28, 0.1, 2e-4, a1.data(), b1.data(), p1.data());
        avx2_kernels().reaction_rates(c2.data(), c3.data(), n, 0.28, 0.1, 2e-4, a2.data(), b2.data(), p2.data());
        EXPECT_TRUE(bitwise_equal(a1, a2) && bitwise_equal(b1, b2) && bitwise_equal(p1, p2)) << n;
    }
}

TEST(SimdDispatch, ForcingScalarSelectsReferenceTable) {
    const Isa original = active_isa();
    force_isa(Isa::Scalar);
    EXPECT_EQ(active_isa(), Isa::Scalar);
    EXPECT_EQ(&kernels(), &scalar_kernels());
    force_isa(Isa::Avx2);
    EXPECT_EQ(active_isa(), cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar);
    force_isa(original);
}
