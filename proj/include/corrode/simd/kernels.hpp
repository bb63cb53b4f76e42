#pragma once

#include <cstddef>

// Elementwise kernels used in the inner loops of the coupled solver. Each has
// a scalar reference implementation and an AVX2 variant selected at runtime.
// Both variants evaluate the same operation sequence without fused
// multiply-add, so they agree to the last bit on IEEE hardware.

namespace corrode::simd {

enum class Isa { Scalar, Avx2 };

// Degradation with exponent 2: g = (1-phi)^2 / ((1-phi)^2 + a1 phi (1 + a2 phi + a3 phi^2)).
struct DegradationCoeffs {
    double a1;
    double a2;
    double a3;
};

struct KernelTable {
    void (*degradation)(const double* phi, std::size_t n, const DegradationCoeffs& c, double* g, double* dg);
    // history[i] = max(history[i], threshold[i], <s1>^2 * inv_two_modulus[i]) with s1 the
    // major in-plane principal value of (sxx, syy, sxy).
    void (*rankine_history)(const double* sxx, const double* syy, const double* sxy, const double* inv_two_modulus,
                            const double* threshold, std::size_t n, double* history);
    // Backward-Euler precipitate update theta' = (theta + b p0) / (1 + b), b = coef * c3,
    // clamped to [theta, p0]; frozen where p0 - theta <= floor.
    void (*precipitate_update)(const double* theta_p, const double* c3, const double* p0, std::size_t n, double coef,
                               double floor, double* out);
    // kappa = theta_l (1 - phi) dm + phi dc
    void (*effective_diffusivity)(const double* theta_l, const double* phi, std::size_t n, double dm, double dc,
                                  double* out);
    void (*reaction_rates)(const double* c2, const double* c3, std::size_t n, double c_ox, double k23, double k3p,
                           double* r2, double* r3, double* rp);
};

const KernelTable& scalar_kernels();
const KernelTable& avx2_kernels();  // only valid when the CPU supports AVX2

bool cpu_has_avx2();

// Active table: AVX2 when supported unless CORRODE_SIMD=scalar is set.
const KernelTable& kernels();
Isa active_isa();
void force_isa(Isa isa);  // tests and benchmarks; AVX2 request ignored when unsupported

}  // namespace corrode::simd
