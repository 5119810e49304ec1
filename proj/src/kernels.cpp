#include "cope/kernels.hpp"

#include <atomic>

#include "cope/error.hpp"

namespace cope::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

std::atomic<Backend> g_backend{detect_backend()};

}  // namespace

bool backend_supported(Backend b) noexcept {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
            return cpu_has_avx2();
    }
    return false;
}

Backend detect_backend() noexcept {
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

Backend active_backend() noexcept { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!backend_supported(b)) {
        throw ValidationError(std::string("kernel backend not supported on this CPU: ") +
                              backend_name(b));
    }
    g_backend.store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::scalar:
            return "scalar";
        case Backend::avx2:
            return "avx2";
    }
    return "?";
}

Backend parse_backend(const std::string& name) {
    if (name == "scalar") return Backend::scalar;
    if (name == "avx2") return Backend::avx2;
    throw ValidationError("unknown kernel backend '" + name + "' (expected scalar or avx2)");
}

void hue_from_rgb(const std::uint8_t* rgb, std::size_t n, std::uint8_t* out) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == Backend::avx2) {
        detail::hue_from_rgb_avx2(rgb, n, out);
        return;
    }
#endif
    detail::hue_from_rgb_scalar(rgb, n, out);
}

void band_mask(const std::uint8_t* hue, std::size_t n, std::uint8_t lo, std::uint8_t hi,
               std::uint8_t* out) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == Backend::avx2) {
        detail::band_mask_avx2(hue, n, lo, hi, out);
        return;
    }
#endif
    detail::band_mask_scalar(hue, n, lo, hi, out);
}

void row_sums(const std::uint8_t* mask, std::size_t stride, int width, int height,
              std::uint32_t* out) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == Backend::avx2) {
        detail::row_sums_avx2(mask, stride, width, height, out);
        return;
    }
#endif
    detail::row_sums_scalar(mask, stride, width, height, out);
}

void column_sums_accumulate(const std::uint8_t* mask, std::size_t stride, int width, int height,
                            std::uint32_t* out) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == Backend::avx2) {
        detail::column_sums_avx2(mask, stride, width, height, out);
        return;
    }
#endif
    detail::column_sums_scalar(mask, stride, width, height, out);
}

}  // namespace cope::kernels
