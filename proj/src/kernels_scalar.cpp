#include "permflow/kernels.hpp"

#include <cmath>

#include "permflow/rng.hpp"

namespace permflow::kernels {

namespace {

void subset_absorb_scalar(double* sums, double* work, const double* cols,
                          std::size_t ncols, unsigned m) {
    const std::size_t size = std::size_t{1} << m;
    for (std::size_t c = 0; c < ncols; ++c) {
        const double* col = cols + c * m;
        work[0] = 1.0;
        for (unsigned i = 0; i < m; ++i) {
            const double a = col[i];
            const std::size_t half = std::size_t{1} << i;
            for (std::size_t t = 0; t < half; ++t) {
                work[half + t] = work[t] * a;
            }
        }
        for (std::size_t t = 0; t < size; ++t) {
            sums[t] += work[t];
        }
    }
}

inline bool in_window(double v) {
    const double a = std::fabs(v);
    return a == 0.0 || (a >= kEsymLo && a <= kEsymHi);
}

bool esym_sweep_scalar(double* coeff, std::size_t kmax, const double* x,
                       std::size_t n, std::size_t start) {
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = x[j];
        std::size_t hi = start + j + 1;
        if (hi > kmax) hi = kmax;
        for (std::size_t t = hi; t >= 1; --t) {
            coeff[t] = coeff[t] + xj * coeff[t - 1];
        }
        for (std::size_t t = 1; t <= hi; ++t) {
            if (!in_window(coeff[t])) return false;
        }
    }
    return true;
}

void uniform_fill_scalar(double* out, std::size_t count, std::uint64_t seed,
                         std::uint64_t t0) {
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = to_unit(stream_word(seed, t0 + i));
    }
}

}  // namespace

const Table kScalarTable = {
    "scalar",
    &subset_absorb_scalar,
    &esym_sweep_scalar,
    &uniform_fill_scalar,
};

}  // namespace permflow::kernels
