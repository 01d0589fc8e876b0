#include <cstdlib>
#include <string_view>

#include "ltd/kernels.hpp"

namespace ltd::kernels {

#if defined(LTD_HAVE_AVX2_KERNEL)
namespace avx2 {
extern const ScanKernel kernel;
}
#endif

const ScanKernel* avx2_kernel() noexcept {
#if defined(LTD_HAVE_AVX2_KERNEL)
    static const bool supported = __builtin_cpu_supports("avx2") != 0;
    return supported ? &avx2::kernel : nullptr;
#else
    return nullptr;
#endif
}

const ScanKernel& active_kernel() noexcept {
    static const ScanKernel& chosen = [] () -> const ScanKernel& {
        const char* forced = std::getenv("LTD_KERNEL");
        if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_kernel();
        if (const auto* k = avx2_kernel()) return *k;
        return scalar_kernel();
    }();
    return chosen;
}

}  // namespace ltd::kernels
