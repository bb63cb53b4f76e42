#include <atomic>
#include <cstdlib>
#include <cstring>

#include "corrode/simd/kernels.hpp"

namespace corrode::simd {

namespace {

Isa detect() {
    const char* env = std::getenv("CORRODE_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (isa == Isa::Avx2 && !cpu_has_avx2()) isa = Isa::Scalar;
    current().store(isa, std::memory_order_relaxed);
}

const KernelTable& kernels() { return active_isa() == Isa::Avx2 ? avx2_kernels() : scalar_kernels(); }

}  // namespace corrode::simd
