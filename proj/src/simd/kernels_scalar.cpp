#include <algorithm>
#include <cmath>

#include "corrode/simd/kernels.hpp"

namespace corrode::simd {

namespace {

void degradation(const double* phi, std::size_t n, const DegradationCoeffs& c, double* g, double* dg) {
    for (std::size_t i = 0; i < n; ++i) {
        const double x = phi[i];
        const double om = 1.0 - x;
        const double p = om * om;
        const double dp = -2.0 * om;
        const double poly = 1.0 + (c.a2 + c.a3 * x) * x;
        const double q = c.a1 * x * poly;
        const double dq = c.a1 * (1.0 + (2.0 * c.a2 + 3.0 * c.a3 * x) * x);
        const double s = p + q;
        g[i] = p / s;
        dg[i] = (dp * q - p * dq) / (s * s);
    }
}

void rankine_history(const double* sxx, const double* syy, const double* sxy, const double* inv_two_modulus,
                     const double* threshold, std::size_t n, double* history) {
    for (std::size_t i = 0; i < n; ++i) {
        const double mid = 0.5 * (sxx[i] + syy[i]);
        const double dev = 0.5 * (sxx[i] - syy[i]);
        const double s1 = mid + std::sqrt(dev * dev + sxy[i] * sxy[i]);
        const double pos = std::max(s1, 0.0);
        const double h = pos * pos * inv_two_modulus[i];
        history[i] = std::max(history[i], std::max(threshold[i], h));
    }
}

void precipitate_update(const double* theta_p, const double* c3, const double* p0, std::size_t n, double coef,
                        double floor, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double b = coef * c3[i];
        const double next = (theta_p[i] + b * p0[i]) / (1.0 + b);
        const double clamped = std::min(std::max(next, theta_p[i]), p0[i]);
        out[i] = (p0[i] - theta_p[i] <= floor) ? theta_p[i] : clamped;
    }
}

void effective_diffusivity(const double* theta_l, const double* phi, std::size_t n, double dm, double dc,
                           double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = theta_l[i] * (1.0 - phi[i]) * dm + phi[i] * dc;
}

void reaction_rates(const double* c2, const double* c3, std::size_t n, double c_ox, double k23, double k3p,
                    double* r2, double* r3, double* rp) {
    const double k = k23 * c_ox;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = -(k * c2[i]);
        const double p = k3p * c3[i];
        r2[i] = a;
        rp[i] = p;
        r3[i] = -a - p;
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{degradation, rankine_history, precipitate_update, effective_diffusivity,
                                   reaction_rates};
    return table;
}

}  // namespace corrode::simd
