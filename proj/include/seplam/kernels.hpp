#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

// Data-parallel inner loops of the Chebyshev machinery. Each kernel has a
// scalar reference implementation and vector variants; the variant is picked
// once at startup from CPUID (override with SEPLAM_SIMD=scalar|avx2|neon).

namespace seplam::kernels {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
    Isa isa;
    /// y = M x, M row-major with `rows` x `cols` entries.
    void (*matvec)(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
    /// out[i] = sum_k c[k] T_k(x[i]) by Clenshaw recurrence, x[i] in [-1, 1].
    void (*clenshaw)(const double* c, std::size_t n_coeffs, const double* x, std::size_t n_points,
                     double* out);
};

bool available(Isa isa);
const KernelTable& table(Isa isa);  // throws std::invalid_argument when unavailable
const KernelTable& active();
std::string_view name(Isa isa);
std::optional<Isa> parse_isa(std::string_view text);

inline void matvec(std::span<const double> m, std::size_t rows, std::span<const double> x, std::span<double> y) {
    active().matvec(m.data(), rows, x.size(), x.data(), y.data());
}

inline void clenshaw(std::span<const double> coeffs, std::span<const double> x, std::span<double> out) {
    active().clenshaw(coeffs.data(), coeffs.size(), x.data(), x.size(), out.data());
}

namespace detail {
extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
#if defined(__aarch64__)
extern const KernelTable neon_table;
#endif
}  // namespace detail

}  // namespace seplam::kernels
