// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "ltd/kernels.hpp"

namespace ltd::kernels::avx2 {
namespace {

void update(std::int64_t* p, const std::int64_t* col, std::size_t len, bool add) noexcept {
    if (add) {
        for (std::size_t i = 0; i < len; i += kLanes) {
            const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
            const __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(col + i));
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(p + i), _mm256_add_epi64(a, c));
        }
    } else {
        for (std::size_t i = 0; i < len; i += kLanes) {
            const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
            const __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(col + i));
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(p + i), _mm256_sub_epi64(a, c));
        }
    }
}

bool any_escape(const std::int64_t* p, const std::int64_t* member, const std::int64_t* lo, const std::int64_t* hi,
                std::size_t len) noexcept {
    __m256i acc = _mm256_setzero_si256();
    for (std::size_t i = 0; i < len; i += kLanes) {
        const __m256i pv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        const __m256i mv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(member + i));
        const __m256i lov = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lo + i));
        const __m256i hiv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(hi + i));
        const __m256i below = _mm256_cmpgt_epi64(lov, pv);  // p < lo
        const __m256i above = _mm256_cmpgt_epi64(pv, hiv);  // p > hi
        acc = _mm256_or_si256(acc, _mm256_blendv_epi8(above, below, mv));
    }
    return _mm256_testz_si256(acc, acc) == 0;
}

}  // namespace

extern const ScanKernel kernel;
const ScanKernel kernel{"avx2", &update, &any_escape};

}  // namespace ltd::kernels::avx2
