// AVX2 kernel variants. This translation unit is compiled with -mavx2; the
// functions are only reachable after the runtime cpu_has_avx2() check.
// Each loop mirrors the scalar reference's per-element operation order, so
// results are bit-identical (mul/add intrinsics only, no FMA).

#include "itts/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

namespace itts::kernels {

namespace {

void matvec_acc_avx2(float* y, const float* w, const float* x, std::size_t cols,
                     std::size_t rows) {
    const std::size_t r8 = rows - rows % 8;
    for (std::size_t i = 0; i < cols; ++i) {
        const float xi = x[i];
        const float* wrow = w + i * rows;
        const __m256 vx = _mm256_set1_ps(xi);
        std::size_t r = 0;
        for (; r < r8; r += 8) {
            __m256 acc = _mm256_loadu_ps(y + r);
            acc = _mm256_add_ps(acc, _mm256_mul_ps(_mm256_loadu_ps(wrow + r), vx));
            _mm256_storeu_ps(y + r, acc);
        }
        for (; r < rows; ++r) y[r] += wrow[r] * xi;
    }
}

void relu_avx2(float* v, std::size_t n) {
    const __m256 zero = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(v + i, _mm256_max_ps(_mm256_loadu_ps(v + i), zero));
    for (; i < n; ++i) v[i] = v[i] > 0.0f ? v[i] : 0.0f;
}

double dot_f32_avx2(const float* a, const float* b, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    const std::size_t blocks = n / 4;
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        const std::size_t base = blk * 4;
        const __m256d va = _mm256_cvtps_pd(_mm_loadu_ps(a + base));
        const __m256d vb = _mm256_cvtps_pd(_mm_loadu_ps(b + base));
        vacc = _mm256_add_pd(vacc, _mm256_mul_pd(va, vb));
    }
    alignas(32) double acc[4];
    _mm256_store_pd(acc, vacc);
    for (std::size_t j = 0; j < n % 4; ++j) {
        const std::size_t idx = blocks * 4 + j;
        acc[j] += static_cast<double>(a[idx]) * static_cast<double>(b[idx]);
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void crossfade_mix_avx2(const float* a_tail, const float* b_head, float* out,
                        std::size_t overlap) {
    const float denom = static_cast<float>(overlap + 1);
    const __m256 vdenom = _mm256_set1_ps(denom);
    const __m256 vone = _mm256_set1_ps(1.0f);
    const __m256 iota = _mm256_setr_ps(1.0f, 2.0f, 3.0f, 4.0f, 5.0f, 6.0f, 7.0f, 8.0f);
    std::size_t i = 0;
    for (; i + 8 <= overlap; i += 8) {
        const __m256 idx = _mm256_add_ps(_mm256_set1_ps(static_cast<float>(i)), iota);
        const __m256 w = _mm256_div_ps(idx, vdenom);
        const __m256 fa = _mm256_mul_ps(_mm256_loadu_ps(a_tail + i), _mm256_sub_ps(vone, w));
        const __m256 fb = _mm256_mul_ps(_mm256_loadu_ps(b_head + i), w);
        _mm256_storeu_ps(out + i, _mm256_add_ps(fa, fb));
    }
    for (; i < overlap; ++i) {
        const float w = static_cast<float>(i + 1) / denom;
        out[i] = a_tail[i] * (1.0f - w) + b_head[i] * w;
    }
}

}  // namespace

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

const Backend* avx2_backend() {
    if (!cpu_has_avx2()) return nullptr;
    static const Backend backend{"avx2", matvec_acc_avx2, relu_avx2, dot_f32_avx2,
                                 crossfade_mix_avx2};
    return &backend;
}

}  // namespace itts::kernels

#else

namespace itts::kernels {
bool cpu_has_avx2() { return false; }
const Backend* avx2_backend() { return nullptr; }
}  // namespace itts::kernels

#endif
