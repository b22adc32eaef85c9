#include <atomic>
#include <cstdlib>
#include <string_view>

#include "phasefn/errors.hpp"
#include "phasefn/simd/kernels.hpp"

namespace phasefn::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(PHASEFN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* detect() noexcept {
    const char* env = std::getenv("PHASEFN_ISA");
    if (env && std::string_view(env) == "scalar") return &scalar_table();
#if defined(PHASEFN_HAVE_AVX2)
    if (cpu_has_avx2()) return &detail::avx2_table();
#endif
    return &scalar_table();
}

std::atomic<const KernelTable*>& slot() noexcept {
    static std::atomic<const KernelTable*> s{detect()};
    return s;
}

}  // namespace

bool isa_available(Isa isa) noexcept {
    return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2());
}

const KernelTable& table_for(Isa isa) {
    if (isa == Isa::scalar) return scalar_table();
#if defined(PHASEFN_HAVE_AVX2)
    if (cpu_has_avx2()) return detail::avx2_table();
#endif
    throw UsageError(std::string("ISA not available on this CPU: ") + isa_name(isa));
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

Isa active_isa() noexcept { return active().isa; }

void set_isa(Isa isa) { slot().store(&table_for(isa), std::memory_order_release); }

const char* isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace phasefn::simd
