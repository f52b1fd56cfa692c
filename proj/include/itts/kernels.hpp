#pragma once

#include <cstddef>
#include <string>

namespace itts::kernels {

// Data-parallel inner loops of the encoder, drift and assembly stages.
// Every operation has a scalar reference implementation and may have SIMD
// variants. All variants of one operation are bit-identical by contract:
// they perform the same per-element operations in the same order, so runtime
// dispatch never changes results. Reductions fix their accumulation scheme
// (see dot_f32) for the same reason. The build disables FP contraction.

// y[r] += sum_i w[i*rows + r] * x[i]   for r in [0, rows)
// w is stored input-major; the i-outer/r-inner order makes each y[r] a plain
// sequential sum, identical across variants.
using MatvecAccFn = void (*)(float* y, const float* w, const float* x, std::size_t cols,
                             std::size_t rows);

// v[i] = v[i] > 0 ? v[i] : 0
using ReluFn = void (*)(float* v, std::size_t n);

// Dot product with a fixed blocked accumulation: four double accumulators,
// lane j takes elements i with i % 4 == j, combined as (a0+a1)+(a2+a3).
using DotFn = double (*)(const float* a, const float* b, std::size_t n);

// out[i] = a[i]*(1-w) + b[i]*w  with  w = float(i+1)/float(overlap+1)
using CrossfadeMixFn = void (*)(const float* a_tail, const float* b_head, float* out,
                                std::size_t overlap);

struct Backend {
    const char* name;
    MatvecAccFn matvec_acc;
    ReluFn relu;
    DotFn dot_f32;
    CrossfadeMixFn crossfade_mix;
};

const Backend& scalar_backend();
bool cpu_has_avx2();
const Backend* avx2_backend();  // nullptr when unsupported by build or CPU

// Active backend: best available unless overridden by force_backend() or the
// ITTS_KERNELS environment variable ("scalar" or "avx2").
const Backend& active();
void force_backend(const std::string& name);  // "auto", "scalar", "avx2"

inline void matvec_acc(float* y, const float* w, const float* x, std::size_t cols,
                       std::size_t rows) {
    active().matvec_acc(y, w, x, cols, rows);
}
inline void relu(float* v, std::size_t n) { active().relu(v, n); }
inline double dot_f32(const float* a, const float* b, std::size_t n) {
    return active().dot_f32(a, b, n);
}
inline void crossfade_mix(const float* a_tail, const float* b_head, float* out,
                          std::size_t overlap) {
    active().crossfade_mix(a_tail, b_head, out, overlap);
}

}  // namespace itts::kernels
