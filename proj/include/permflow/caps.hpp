#pragma once

namespace permflow {

/// Enumeration limits. All of them are configuration, not constants: the CLI
/// exposes overrides and tests tighten them to exercise the failure paths.
struct Caps {
    /// Maximum number of injection terms permanent_naive will enumerate.
    double naive_term_cap = 1e8;
    /// Maximum total column-subset count for the Ryser evaluation.
    double subset_enum_cap = 1e8;
    /// Maximum row count for set-partition sweeps (Bell(12) ~ 4.2e6).
    int partition_m_cap = 12;
};

/// Hard ceiling on partition row count regardless of configuration. Factorial
/// and Bell tables, bitmask widths and RGS buffers are sized for this.
inline constexpr int kPartitionHardCap = 16;

}  // namespace permflow
