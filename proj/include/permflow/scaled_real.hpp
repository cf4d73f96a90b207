#pragma once

#include <cmath>
#include <cstdint>

namespace permflow {

/// A real carried as mantissa * 2^exp2. Elementary-symmetric coefficients
/// overflow plain doubles near degree n/2 once n reaches the thousands; this
/// keeps the recurrence exact-to-rounding for n up to 1e6 and |x| up to 1e3.
///
/// The mantissa is renormalized (frexp) whenever it leaves
/// [2^-512, 2^512], so while values stay inside that window every operation
/// is the plain double operation and results match raw-double evaluation bit
/// for bit. Scaling by powers of two is exact, so renormalization never
/// changes the represented value.
struct ScaledReal {
    double mant = 0.0;
    std::int64_t exp2 = 0;

    static constexpr double kWindowLo = 0x1.0p-512;
    static constexpr double kWindowHi = 0x1.0p+512;

    ScaledReal() = default;
    ScaledReal(double m, std::int64_t e) : mant(m), exp2(e) { renorm(); }

    static ScaledReal from(double v) { return ScaledReal(v, 0); }

    bool is_zero() const { return mant == 0.0; }
    int sign() const { return mant > 0.0 ? 1 : (mant < 0.0 ? -1 : 0); }

    /// May overflow to +/-inf or underflow to 0 outside double range.
    double to_double() const {
        if (mant == 0.0) return 0.0;
        if (exp2 > 2048) return mant > 0 ? HUGE_VAL : -HUGE_VAL;
        if (exp2 < -2048) return mant > 0 ? 0.0 : -0.0;
        return std::ldexp(mant, static_cast<int>(exp2));
    }

    /// log |value|; -inf for zero.
    double log_abs() const {
        if (mant == 0.0) return -HUGE_VAL;
        return std::log(std::fabs(mant)) +
               static_cast<double>(exp2) * 0.6931471805599453;
    }

    void renorm() {
        const double a = std::fabs(mant);
        if (a == 0.0) {
            exp2 = 0;
            return;
        }
        if (a >= kWindowLo && a <= kWindowHi) return;
        int e = 0;
        mant = std::frexp(mant, &e);
        exp2 += e;
    }

    ScaledReal& operator*=(double v) {
        squeeze();
        mant *= v;
        renorm();
        return *this;
    }

    ScaledReal& operator*=(const ScaledReal& o) {
        ScaledReal b = o;
        squeeze();
        b.squeeze();
        mant *= b.mant;
        exp2 += b.exp2;
        renorm();
        return *this;
    }

    ScaledReal& operator+=(const ScaledReal& o) {
        if (o.mant == 0.0) return *this;
        if (mant == 0.0) {
            *this = o;
            return *this;
        }
        if (exp2 >= o.exp2) {
            const std::int64_t d = exp2 - o.exp2;
            if (d < 4096) {
                mant += std::ldexp(o.mant, static_cast<int>(-d));
                renorm();
            }
        } else {
            const std::int64_t d = o.exp2 - exp2;
            if (d < 4096) {
                mant = o.mant + std::ldexp(mant, static_cast<int>(-d));
                exp2 = o.exp2;
                renorm();
            } else {
                *this = o;
            }
        }
        return *this;
    }

private:
    // Pull an oversized mantissa back before a multiply so the product
    // cannot overflow; values in the window are left untouched.
    void squeeze() {
        const double a = std::fabs(mant);
        if (a == 0.0 || (a >= 0x1.0p-256 && a <= 0x1.0p+256)) return;
        int e = 0;
        mant = std::frexp(mant, &e);
        exp2 += e;
    }
};

inline ScaledReal operator*(ScaledReal a, double b) { return a *= b; }
inline ScaledReal operator*(ScaledReal a, const ScaledReal& b) { return a *= b; }
inline ScaledReal operator+(ScaledReal a, const ScaledReal& b) { return a += b; }

}  // namespace permflow
