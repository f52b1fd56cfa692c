#include "itts/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace itts::kernels {

namespace {

const Backend* pick_auto() {
    if (const Backend* simd = avx2_backend()) return simd;
    return &scalar_backend();
}

std::atomic<const Backend*> g_active{nullptr};

const Backend* initial_backend() {
    if (const char* env = std::getenv("ITTS_KERNELS")) {
        const std::string name(env);
        if (name == "scalar") return &scalar_backend();
        if (name == "avx2" && avx2_backend()) return avx2_backend();
    }
    return pick_auto();
}

}  // namespace

const Backend& active() {
    const Backend* b = g_active.load(std::memory_order_acquire);
    if (!b) {
        b = initial_backend();
        g_active.store(b, std::memory_order_release);
    }
    return *b;
}

void force_backend(const std::string& name) {
    if (name == "auto") {
        g_active.store(pick_auto(), std::memory_order_release);
    } else if (name == "scalar") {
        g_active.store(&scalar_backend(), std::memory_order_release);
    } else if (name == "avx2") {
        const Backend* simd = avx2_backend();
        if (!simd) throw std::runtime_error("avx2 kernels unavailable on this CPU/build");
        g_active.store(simd, std::memory_order_release);
    } else {
        throw std::runtime_error("unknown kernel backend: " + name);
    }
}

}  // namespace itts::kernels
