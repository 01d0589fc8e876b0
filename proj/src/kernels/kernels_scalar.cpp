#include "ltd/kernels.hpp"

namespace ltd::kernels {
namespace {

void update_scalar(std::int64_t* p, const std::int64_t* col, std::size_t len, bool add) noexcept {
    if (add) {
        for (std::size_t i = 0; i < len; ++i) p[i] += col[i];
    } else {
        for (std::size_t i = 0; i < len; ++i) p[i] -= col[i];
    }
}

bool any_escape_scalar(const std::int64_t* p, const std::int64_t* member, const std::int64_t* lo,
                       const std::int64_t* hi, std::size_t len) noexcept {
    for (std::size_t i = 0; i < len; ++i) {
        if (member[i] != 0 ? p[i] < lo[i] : p[i] > hi[i]) return true;
    }
    return false;
}

}  // namespace

const ScanKernel& scalar_kernel() noexcept {
    static const ScanKernel k{"scalar", &update_scalar, &any_escape_scalar};
    return k;
}

}  // namespace ltd::kernels
