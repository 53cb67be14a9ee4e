#include "see/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace see::simd {

#ifdef SEE_HAVE_AVX2
namespace detail {
const KernelTable& avx2_table();
}
#endif

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    }
    return "unknown";
}

const KernelTable* avx2_kernels() {
#ifdef SEE_HAVE_AVX2
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

std::vector<Isa> available_isas() {
    std::vector<Isa> isas{Isa::scalar};
    if (avx2_kernels() != nullptr) isas.push_back(Isa::avx2);
    return isas;
}

const KernelTable& table(Isa isa) {
    if (isa == Isa::scalar) return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    throw std::runtime_error("SIMD variant not available on this machine: " + std::string(isa_name(isa)));
}

namespace {

const KernelTable* initial_selection() {
    if (const char* env = std::getenv("SEE_SIMD")) {
        const std::string_view want{env};
        if (want == "scalar") return &scalar_kernels();
        if (want == "avx2" && avx2_kernels() != nullptr) return avx2_kernels();
    }
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> selected{initial_selection()};
    return selected;
}

} // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) { current().store(&table(isa), std::memory_order_release); }

} // namespace see::simd
