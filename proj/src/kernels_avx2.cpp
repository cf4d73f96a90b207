// AVX2 variants of the scalar kernels. Multiplies and adds are kept separate
// (no FMA) so results are bit-identical to the scalar reference.

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "permflow/kernels.hpp"
#include "permflow/rng.hpp"

namespace permflow::kernels {

extern const Table kAvx2Table;

namespace {

void subset_absorb_avx2(double* sums, double* work, const double* cols,
                        std::size_t ncols, unsigned m) {
    const std::size_t size = std::size_t{1} << m;
    for (std::size_t c = 0; c < ncols; ++c) {
        const double* col = cols + c * m;
        work[0] = 1.0;
        for (unsigned i = 0; i < m; ++i) {
            const double a = col[i];
            const std::size_t half = std::size_t{1} << i;
            if (half < 4) {
                for (std::size_t t = 0; t < half; ++t) {
                    work[half + t] = work[t] * a;
                }
            } else {
                const __m256d va = _mm256_set1_pd(a);
                for (std::size_t t = 0; t < half; t += 4) {
                    const __m256d src = _mm256_loadu_pd(work + t);
                    _mm256_storeu_pd(work + half + t, _mm256_mul_pd(src, va));
                }
            }
        }
        if (size < 4) {
            for (std::size_t t = 0; t < size; ++t) sums[t] += work[t];
        } else {
            for (std::size_t t = 0; t < size; t += 4) {
                const __m256d s = _mm256_loadu_pd(sums + t);
                const __m256d w = _mm256_loadu_pd(work + t);
                _mm256_storeu_pd(sums + t, _mm256_add_pd(s, w));
            }
        }
    }
}

inline bool in_window(double v) {
    const double a = std::fabs(v);
    return a == 0.0 || (a >= kEsymLo && a <= kEsymHi);
}

bool esym_sweep_avx2(double* coeff, std::size_t kmax, const double* x,
                     std::size_t n, std::size_t start) {
    const __m256d abs_mask =
        _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFll));
    const __m256d vlo = _mm256_set1_pd(kEsymLo);
    const __m256d vhi = _mm256_set1_pd(kEsymHi);
    const __m256d vzero = _mm256_setzero_pd();

    for (std::size_t j = 0; j < n; ++j) {
        const double xj = x[j];
        std::size_t hi = start + j + 1;
        if (hi > kmax) hi = kmax;

        const __m256d vx = _mm256_set1_pd(xj);
        __m256d viol = _mm256_setzero_pd();
        std::size_t t = hi;
        // Blocks walk downward so every load of coeff[t-1] sees the value
        // from before this column's pass, same as the scalar loop.
        for (; t >= 4; t -= 4) {
            const __m256d prev = _mm256_loadu_pd(coeff + t - 4);
            const __m256d cur = _mm256_loadu_pd(coeff + t - 3);
            const __m256d upd = _mm256_add_pd(cur, _mm256_mul_pd(vx, prev));
            _mm256_storeu_pd(coeff + t - 3, upd);

            const __m256d a = _mm256_and_pd(upd, abs_mask);
            const __m256d under = _mm256_and_pd(
                _mm256_cmp_pd(a, vzero, _CMP_GT_OQ),
                _mm256_cmp_pd(a, vlo, _CMP_LT_OQ));
            const __m256d over = _mm256_cmp_pd(a, vhi, _CMP_GT_OQ);
            viol = _mm256_or_pd(viol, _mm256_or_pd(under, over));
        }
        bool bad = _mm256_movemask_pd(viol) != 0;
        for (; t >= 1; --t) {
            coeff[t] = coeff[t] + xj * coeff[t - 1];
            bad = bad || !in_window(coeff[t]);
        }
        if (bad) return false;
    }
    return true;
}

// 64-bit lane-wise product from 32-bit partial products.
inline __m256i mullo64(__m256i a, __m256i b) {
    const __m256i lo = _mm256_mul_epu32(a, b);
    const __m256i ah = _mm256_srli_epi64(a, 32);
    const __m256i bh = _mm256_srli_epi64(b, 32);
    const __m256i cross =
        _mm256_add_epi64(_mm256_mul_epu32(ah, b), _mm256_mul_epu32(a, bh));
    return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix_avx2(__m256i z) {
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
    z = mullo64(z, _mm256_set1_epi64x(int64_t(0xBF58476D1CE4E5B9ull)));
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
    z = mullo64(z, _mm256_set1_epi64x(int64_t(0x94D049BB133111EBull)));
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
    return z;
}

void uniform_fill_avx2(double* out, std::size_t count, std::uint64_t seed,
                       std::uint64_t t0) {
    // Each lane carries seed + (t+1)*GAMMA; stepping by 4*GAMMA avoids a
    // multiply per iteration.
    const std::uint64_t g = kSplitMixGamma;
    __m256i state = _mm256_set_epi64x(
        int64_t(seed + (t0 + 4) * g), int64_t(seed + (t0 + 3) * g),
        int64_t(seed + (t0 + 2) * g), int64_t(seed + (t0 + 1) * g));
    const __m256i step = _mm256_set1_epi64x(int64_t(4 * g));

    // Exact u64 -> double for values below 2^53: split into 32-bit halves,
    // rebase each off 2^52, recombine. Matches the scalar cast bit for bit.
    const __m256i lo_mask = _mm256_set1_epi64x(0xFFFFFFFFll);
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000ll);
    const __m256d magic_d = _mm256_set1_pd(0x1.0p52);
    const __m256d two32 = _mm256_set1_pd(0x1.0p32);
    const __m256d scale = _mm256_set1_pd(0x1.0p-53);

    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256i z = mix_avx2(state);
        state = _mm256_add_epi64(state, step);

        const __m256i bits = _mm256_srli_epi64(z, 11);
        const __m256i lo = _mm256_and_si256(bits, lo_mask);
        const __m256i hi = _mm256_srli_epi64(bits, 32);
        const __m256d lo_d = _mm256_sub_pd(
            _mm256_castsi256_pd(_mm256_or_si256(lo, magic)), magic_d);
        const __m256d hi_d = _mm256_sub_pd(
            _mm256_castsi256_pd(_mm256_or_si256(hi, magic)), magic_d);
        const __m256d value =
            _mm256_add_pd(_mm256_mul_pd(hi_d, two32), lo_d);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(value, scale));
    }
    for (; i < count; ++i) {
        out[i] = to_unit(stream_word(seed, t0 + i));
    }
}

}  // namespace

const Table kAvx2Table = {
    "avx2",
    &subset_absorb_avx2,
    &esym_sweep_avx2,
    &uniform_fill_avx2,
};

}  // namespace permflow::kernels

#endif  // x86
