#include "corrode/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

#define CORRODE_AVX2 __attribute__((target("avx2")))

namespace corrode::simd {

namespace {

CORRODE_AVX2 void degradation(const double* phi, std::size_t n, const DegradationCoeffs& c, double* g, double* dg) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d m_two = _mm256_set1_pd(-2.0);
    const __m256d a1 = _mm256_set1_pd(c.a1);
    const __m256d a2 = _mm256_set1_pd(c.a2);
    const __m256d a3 = _mm256_set1_pd(c.a3);
    const __m256d two_a2 = _mm256_set1_pd(2.0 * c.a2);
    const __m256d three_a3 = _mm256_set1_pd(3.0 * c.a3);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(phi + i);
        const __m256d om = _mm256_sub_pd(one, x);
        const __m256d p = _mm256_mul_pd(om, om);
        const __m256d dp = _mm256_mul_pd(m_two, om);
        const __m256d poly = _mm256_add_pd(one, _mm256_mul_pd(_mm256_add_pd(a2, _mm256_mul_pd(a3, x)), x));
        const __m256d q = _mm256_mul_pd(_mm256_mul_pd(a1, x), poly);
        const __m256d dq =
            _mm256_mul_pd(a1, _mm256_add_pd(one, _mm256_mul_pd(_mm256_add_pd(two_a2, _mm256_mul_pd(three_a3, x)), x)));
        const __m256d s = _mm256_add_pd(p, q);
        _mm256_storeu_pd(g + i, _mm256_div_pd(p, s));
        const __m256d num = _mm256_sub_pd(_mm256_mul_pd(dp, q), _mm256_mul_pd(p, dq));
        _mm256_storeu_pd(dg + i, _mm256_div_pd(num, _mm256_mul_pd(s, s)));
    }
    if (i < n) scalar_kernels().degradation(phi + i, n - i, c, g + i, dg + i);
}

CORRODE_AVX2 void rankine_history(const double* sxx, const double* syy, const double* sxy,
                                  const double* inv_two_modulus, const double* threshold, std::size_t n,
                                  double* history) {
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xx = _mm256_loadu_pd(sxx + i);
        const __m256d yy = _mm256_loadu_pd(syy + i);
        const __m256d xy = _mm256_loadu_pd(sxy + i);
        const __m256d mid = _mm256_mul_pd(half, _mm256_add_pd(xx, yy));
        const __m256d dev = _mm256_mul_pd(half, _mm256_sub_pd(xx, yy));
        const __m256d rad = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dev, dev), _mm256_mul_pd(xy, xy)));
        const __m256d pos = _mm256_max_pd(_mm256_add_pd(mid, rad), zero);
        const __m256d h = _mm256_mul_pd(_mm256_mul_pd(pos, pos), _mm256_loadu_pd(inv_two_modulus + i));
        const __m256d best = _mm256_max_pd(_mm256_loadu_pd(threshold + i), h);
        _mm256_storeu_pd(history + i, _mm256_max_pd(_mm256_loadu_pd(history + i), best));
    }
    if (i < n) {
        scalar_kernels().rankine_history(sxx + i, syy + i, sxy + i, inv_two_modulus + i, threshold + i, n - i,
                                         history + i);
    }
}

CORRODE_AVX2 void precipitate_update(const double* theta_p, const double* c3, const double* p0, std::size_t n,
                                     double coef, double floor, double* out) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d k = _mm256_set1_pd(coef);
    const __m256d fl = _mm256_set1_pd(floor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d th = _mm256_loadu_pd(theta_p + i);
        const __m256d cap = _mm256_loadu_pd(p0 + i);
        const __m256d b = _mm256_mul_pd(k, _mm256_loadu_pd(c3 + i));
        const __m256d next = _mm256_div_pd(_mm256_add_pd(th, _mm256_mul_pd(b, cap)), _mm256_add_pd(one, b));
        const __m256d clamped = _mm256_min_pd(_mm256_max_pd(next, th), cap);
        const __m256d frozen = _mm256_cmp_pd(_mm256_sub_pd(cap, th), fl, _CMP_LE_OQ);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(clamped, th, frozen));
    }
    if (i < n) scalar_kernels().precipitate_update(theta_p + i, c3 + i, p0 + i, n - i, coef, floor, out + i);
}

CORRODE_AVX2 void effective_diffusivity(const double* theta_l, const double* phi, std::size_t n, double dm,
                                        double dc, double* out) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d vdm = _mm256_set1_pd(dm);
    const __m256d vdc = _mm256_set1_pd(dc);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d th = _mm256_loadu_pd(theta_l + i);
        const __m256d ph = _mm256_loadu_pd(phi + i);
        const __m256d intact = _mm256_mul_pd(_mm256_mul_pd(th, _mm256_sub_pd(one, ph)), vdm);
        _mm256_storeu_pd(out + i, _mm256_add_pd(intact, _mm256_mul_pd(ph, vdc)));
    }
    if (i < n) scalar_kernels().effective_diffusivity(theta_l + i, phi + i, n - i, dm, dc, out + i);
}

CORRODE_AVX2 void reaction_rates(const double* c2, const double* c3, std::size_t n, double c_ox, double k23,
                                 double k3p, double* r2, double* r3, double* rp) {
    const __m256d k = _mm256_set1_pd(k23 * c_ox);
    const __m256d kp = _mm256_set1_pd(k3p);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_sub_pd(zero, _mm256_mul_pd(k, _mm256_loadu_pd(c2 + i)));
        const __m256d p = _mm256_mul_pd(kp, _mm256_loadu_pd(c3 + i));
        _mm256_storeu_pd(r2 + i, a);
        _mm256_storeu_pd(rp + i, p);
        _mm256_storeu_pd(r3 + i, _mm256_sub_pd(_mm256_sub_pd(zero, a), p));
    }
    if (i < n) scalar_kernels().reaction_rates(c2 + i, c3 + i, n - i, c_ox, k23, k3p, r2 + i, r3 + i, rp + i);
}

}  // namespace

const KernelTable& avx2_kernels() {
    static const KernelTable table{degradation, rankine_history, precipitate_update, effective_diffusivity,
                                   reaction_rates};
    return table;
}

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

}  // namespace corrode::simd

#else

namespace corrode::simd {
const KernelTable& avx2_kernels() { return scalar_kernels(); }
bool cpu_has_avx2() { return false; }
}  // namespace corrode::simd

#endif
