#include <cstdlib>
#include <stdexcept>
#include <string>

#include "seplam/kernels.hpp"

namespace seplam::kernels {

bool available(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!available(isa)) throw std::invalid_argument("SIMD variant not available: " + std::string(name(isa)));
    switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::avx2:
            return detail::avx2_table;
#endif
#if defined(__aarch64__)
        case Isa::neon:
            return detail::neon_table;
#endif
        default:
            return detail::scalar_table;
    }
}

namespace {

const KernelTable& select() {
    if (const char* forced = std::getenv("SEPLAM_SIMD")) {
        if (auto isa = parse_isa(forced); isa && available(*isa)) return table(*isa);
    }
    if (available(Isa::avx2)) return table(Isa::avx2);
    if (available(Isa::neon)) return table(Isa::neon);
    return table(Isa::scalar);
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& chosen = select();
    return chosen;
}

std::string_view name(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
        case Isa::neon:
            return "neon";
    }
    return "unknown";
}

std::optional<Isa> parse_isa(std::string_view text) {
    if (text == "scalar") return Isa::scalar;
    if (text == "avx2") return Isa::avx2;
    if (text == "neon") return Isa::neon;
    return std::nullopt;
}

}  // namespace seplam::kernels
