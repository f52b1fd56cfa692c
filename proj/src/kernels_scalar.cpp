#include "itts/kernels.hpp"

namespace itts::kernels {

namespace {

void matvec_acc_scalar(float* y, const float* w, const float* x, std::size_t cols,
                       std::size_t rows) {
    for (std::size_t i = 0; i < cols; ++i) {
        const float xi = x[i];
        const float* wrow = w + i * rows;
        for (std::size_t r = 0; r < rows; ++r) y[r] += wrow[r] * xi;
    }
}

void relu_scalar(float* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) v[i] = v[i] > 0.0f ? v[i] : 0.0f;
}

double dot_f32_scalar(const float* a, const float* b, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t blocks = n / 4;
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        const std::size_t base = blk * 4;
        for (std::size_t j = 0; j < 4; ++j)
            acc[j] += static_cast<double>(a[base + j]) * static_cast<double>(b[base + j]);
    }
    for (std::size_t j = 0; j < n % 4; ++j) {
        const std::size_t idx = blocks * 4 + j;
        acc[j] += static_cast<double>(a[idx]) * static_cast<double>(b[idx]);
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void crossfade_mix_scalar(const float* a_tail, const float* b_head, float* out,
                          std::size_t overlap) {
    const float denom = static_cast<float>(overlap + 1);
    for (std::size_t i = 0; i < overlap; ++i) {
        const float w = static_cast<float>(i + 1) / denom;
        out[i] = a_tail[i] * (1.0f - w) + b_head[i] * w;
    }
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend backend{"scalar", matvec_acc_scalar, relu_scalar, dot_f32_scalar,
                                 crossfade_mix_scalar};
    return backend;
}

}  // namespace itts::kernels
