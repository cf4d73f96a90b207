// NEON variants (aarch64). Same op-for-op structure as the scalar kernels;
// the counter RNG stays scalar here (no 64-bit lane multiply worth the
// emulation at width 2).

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <cmath>

#include "permflow/kernels.hpp"
#include "permflow/rng.hpp"

namespace permflow::kernels {

extern const Table kNeonTable;

namespace {

void subset_absorb_neon(double* sums, double* work, const double* cols,
                        std::size_t ncols, unsigned m) {
    const std::size_t size = std::size_t{1} << m;
    for (std::size_t c = 0; c < ncols; ++c) {
        const double* col = cols + c * m;
        work[0] = 1.0;
        for (unsigned i = 0; i < m; ++i) {
            const double a = col[i];
            const std::size_t half = std::size_t{1} << i;
            if (half < 2) {
                work[1] = work[0] * a;
            } else {
                const float64x2_t va = vdupq_n_f64(a);
                for (std::size_t t = 0; t < half; t += 2) {
                    const float64x2_t src = vld1q_f64(work + t);
                    vst1q_f64(work + half + t, vmulq_f64(src, va));
                }
            }
        }
        if (size < 2) {
            sums[0] += work[0];
        } else {
            for (std::size_t t = 0; t < size; t += 2) {
                const float64x2_t s = vld1q_f64(sums + t);
                const float64x2_t w = vld1q_f64(work + t);
                vst1q_f64(sums + t, vaddq_f64(s, w));
            }
        }
    }
}

inline bool in_window(double v) {
    const double a = std::fabs(v);
    return a == 0.0 || (a >= kEsymLo && a <= kEsymHi);
}

bool esym_sweep_neon(double* coeff, std::size_t kmax, const double* x,
                     std::size_t n, std::size_t start) {
    const float64x2_t vlo = vdupq_n_f64(kEsymLo);
    const float64x2_t vhi = vdupq_n_f64(kEsymHi);
    const float64x2_t vzero = vdupq_n_f64(0.0);

    for (std::size_t j = 0; j < n; ++j) {
        const double xj = x[j];
        std::size_t hi = start + j + 1;
        if (hi > kmax) hi = kmax;

        const float64x2_t vx = vdupq_n_f64(xj);
        uint64x2_t viol = vdupq_n_u64(0);
        std::size_t t = hi;
        for (; t >= 2; t -= 2) {
            const float64x2_t prev = vld1q_f64(coeff + t - 2);
            const float64x2_t cur = vld1q_f64(coeff + t - 1);
            const float64x2_t upd = vaddq_f64(cur, vmulq_f64(vx, prev));
            vst1q_f64(coeff + t - 1, upd);

            const float64x2_t a = vabsq_f64(upd);
            const uint64x2_t under =
                vandq_u64(vcgtq_f64(a, vzero), vcltq_f64(a, vlo));
            const uint64x2_t over = vcgtq_f64(a, vhi);
            viol = vorrq_u64(viol, vorrq_u64(under, over));
        }
        bool bad =
            (vgetq_lane_u64(viol, 0) | vgetq_lane_u64(viol, 1)) != 0;
        for (; t >= 1; --t) {
            coeff[t] = coeff[t] + xj * coeff[t - 1];
            bad = bad || !in_window(coeff[t]);
        }
        if (bad) return false;
    }
    return true;
}

void uniform_fill_neon(double* out, std::size_t count, std::uint64_t seed,
                       std::uint64_t t0) {
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = to_unit(stream_word(seed, t0 + i));
    }
}

}  // namespace

const Table kNeonTable = {
    "neon",
    &subset_absorb_neon,
    &esym_sweep_neon,
    &uniform_fill_neon,
};

}  // namespace permflow::kernels

#endif  // aarch64
