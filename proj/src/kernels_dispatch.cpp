#include "permflow/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace permflow::kernels {

#if defined(__x86_64__) || defined(__i386__)
extern const Table kAvx2Table;
#elif defined(__aarch64__) && defined(__ARM_NEON)
extern const Table kNeonTable;
#endif

namespace {

std::atomic<Mode> g_mode{Mode::Auto};

const Table* simd_table() {
#if defined(__x86_64__) || defined(__i386__)
    if (__builtin_cpu_supports("avx2")) return &kAvx2Table;
    return nullptr;
#elif defined(__aarch64__) && defined(__ARM_NEON)
    return &kNeonTable;
#else
    return nullptr;
#endif
}

Mode env_mode() {
    const char* v = std::getenv("PERMFLOW_KERNELS");
    if (v == nullptr) return Mode::Auto;
    if (std::strcmp(v, "scalar") == 0) return Mode::Scalar;
    if (std::strcmp(v, "simd") == 0) return Mode::Simd;
    return Mode::Auto;
}

}  // namespace

bool simd_supported() { return simd_table() != nullptr; }

void set_mode(Mode mode) { g_mode.store(mode, std::memory_order_relaxed); }

Mode mode() { return g_mode.load(std::memory_order_relaxed); }

const Table& active() {
    Mode m = g_mode.load(std::memory_order_relaxed);
    if (m == Mode::Auto) {
        static const Mode from_env = env_mode();
        m = from_env;
    }
    if (m == Mode::Scalar) return kScalarTable;
    const Table* simd = simd_table();
    if (m == Mode::Simd && simd != nullptr) return *simd;
    // Auto, or Simd requested on a machine without it.
    return simd != nullptr ? *simd : kScalarTable;
}

std::vector<const Table*> available() {
    std::vector<const Table*> tables{&kScalarTable};
    if (const Table* simd = simd_table()) tables.push_back(simd);
    return tables;
}

}  // namespace permflow::kernels
