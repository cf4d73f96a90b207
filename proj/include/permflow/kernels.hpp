#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace permflow::kernels {

// Data-parallel inner loops used by the subset-sum stream, the
// elementary-symmetric recurrence and the counter RNG. Every entry exists as
// a scalar reference kernel and, where the platform supports it, as a SIMD
// variant selected at runtime. Variants are bit-identical by contract: same
// operations per output element, in the same order, no fused multiply-add.

/// Coefficient window of the elementary-symmetric fast path. A sweep reports
/// failure as soon as any coefficient leaves [kEsymLo, kEsymHi] (exact zeros
/// are fine); the caller then redoes the computation in scaled arithmetic.
inline constexpr double kEsymLo = 0x1.0p-512;
inline constexpr double kEsymHi = 0x1.0p+512;

struct Table {
    const char* name;

    /// Absorb `ncols` columns (column-major, `m` doubles each) into the
    /// subset-sum array `sums` of size 1 << m, indexed by row bitmask.
    /// Entry 0 counts absorbed columns (empty products). `work` is caller
    /// scratch of the same size. Per column: mask products are built by the
    /// doubling recurrence work[mask | 1<<i] = work[mask] * col[i], then
    /// added into `sums`.
    void (*subset_absorb)(double* sums, double* work, const double* cols,
                          std::size_t ncols, unsigned m);

    /// One elementary-symmetric pass: for each x[j], update
    /// coeff[t] += x[j] * coeff[t-1] for t = min(start+j+1, kmax) down to 1.
    /// `coeff` has kmax+1 entries with coeff[0] == 1; `start` is the number
    /// of values absorbed before this call. Returns false (coeff dirty) when
    /// a coefficient leaves the window above.
    bool (*esym_sweep)(double* coeff, std::size_t kmax, const double* x,
                       std::size_t n, std::size_t start);

    /// out[i] = unit double from word t0+i of the splitmix64 counter stream.
    void (*uniform_fill)(double* out, std::size_t count, std::uint64_t seed,
                         std::uint64_t t0);
};

enum class Mode { Auto, Scalar, Simd };

/// Kernel table for the current mode. Auto picks the best supported variant,
/// overridable via the PERMFLOW_KERNELS environment variable (scalar|simd).
const Table& active();

void set_mode(Mode mode);
Mode mode();

/// All tables usable on this machine (scalar first). Equivalence tests sweep
/// this list and require bit-identical results between every pair.
std::vector<const Table*> available();

bool simd_supported();

extern const Table kScalarTable;

}  // namespace permflow::kernels
