#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Integer inner loops of the exhaustive subset scans.
//
// A scan keeps, for every agent i, p_i = 2 * sum_{j in S} W_ij in a scaled
// integer domain and asks after each Gray-code step whether some agent
// "escapes" the current subset S:
//
//     i in S      escapes iff p_i < lo_i
//     i not in S  escapes iff p_i > hi_i
//
// `member` holds -1 for agents in S and 0 otherwise. All arrays are padded to
// a multiple of kLanes; padding lanes must have member = 0 and hi = kNeverEscapes.
namespace ltd::kernels {

inline constexpr std::size_t kLanes = 4;
inline constexpr std::int64_t kNeverEscapes = std::int64_t{1} << 62;

[[nodiscard]] constexpr std::size_t padded(std::size_t n) noexcept { return (n + kLanes - 1) / kLanes * kLanes; }

struct ScanKernel {
    std::string_view name;
    /// p += col (add) or p -= col.
    void (*update)(std::int64_t* p, const std::int64_t* col, std::size_t len, bool add) noexcept;
    bool (*any_escape)(const std::int64_t* p, const std::int64_t* member, const std::int64_t* lo, const std::int64_t* hi,
                       std::size_t len) noexcept;
};

const ScanKernel& scalar_kernel() noexcept;
/// nullptr when not compiled in or not supported by this CPU.
const ScanKernel* avx2_kernel() noexcept;
/// Best supported kernel; LTD_KERNEL=scalar in the environment forces the reference one.
const ScanKernel& active_kernel() noexcept;

}  // namespace ltd::kernels
