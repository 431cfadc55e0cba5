#include <atomic>
#include <cstdlib>
#include <string_view>

#include "saari/core.hpp"
#include "saari/kernels.hpp"

namespace saari::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() {
    if (const char* env = std::getenv("SAARI_ISA")) {
        if (std::string_view(env) == "scalar") return Isa::Scalar;
    }
    return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#ifdef SAARI_BUILD_AVX2
            return cpu_has_avx2();
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
    if (!isa_supported(isa)) throw InvalidArgument(std::string("instruction set not available: ") + isa_name(isa));
    current().store(isa, std::memory_order_relaxed);
}

void gravity(const GravityBatch& batch) {
    if (active_isa() == Isa::Avx2) return avx2::gravity(batch);
    scalar::gravity(batch);
}

void frac_scan(const FracScan& scan, std::vector<std::uint64_t>& hits) {
    if (active_isa() == Isa::Avx2) return avx2::frac_scan(scan, hits);
    scalar::frac_scan(scan, hits);
}

}  // namespace saari::kernels
