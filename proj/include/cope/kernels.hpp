#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

// Data-parallel inner loops of the pipeline: hue conversion, band
// thresholding, and the mask projections behind every energy profile.
// Each kernel has a scalar reference implementation and an AVX2 variant
// producing bit-identical results; the active backend is selected at
// runtime from CPU capabilities and can be forced for testing.

namespace cope::kernels {

enum class Backend {
    scalar,
    avx2,
};

bool backend_supported(Backend b) noexcept;

// Best supported backend for this process (avx2 when the CPU has it).
Backend detect_backend() noexcept;

Backend active_backend() noexcept;

// Throws cope::ValidationError when the CPU lacks the requested backend.
void set_backend(Backend b);

const char* backend_name(Backend b) noexcept;

// Parses "scalar" / "avx2"; throws cope::ValidationError otherwise.
Backend parse_backend(const std::string& name);

// Interleaved RGB triples -> hue bytes on the [0, 179] half-degree
// scale; achromatic pixels map to 0.
void hue_from_rgb(const std::uint8_t* rgb, std::size_t n_pixels, std::uint8_t* hue_out);

// out[i] = 1 if lo <= hue[i] <= hi else 0.
void band_mask(const std::uint8_t* hue, std::size_t n, std::uint8_t lo, std::uint8_t hi,
               std::uint8_t* out);

// out[y] = sum of row y over `width` 0/1 bytes, for rows [0, height).
// `stride` is the distance between consecutive rows of `mask`.
void row_sums(const std::uint8_t* mask, std::size_t stride, int width, int height,
              std::uint32_t* out);

// out[x] += sum over rows [0, height) of column x. Caller zeroes `out`.
void column_sums_accumulate(const std::uint8_t* mask, std::size_t stride, int width, int height,
                            std::uint32_t* out);

namespace detail {

// Reference implementations; exposed so equivalence tests can pin the
// SIMD variants against them regardless of the active backend.
void hue_from_rgb_scalar(const std::uint8_t* rgb, std::size_t n, std::uint8_t* out);
void band_mask_scalar(const std::uint8_t* hue, std::size_t n, std::uint8_t lo, std::uint8_t hi,
                      std::uint8_t* out);
void row_sums_scalar(const std::uint8_t* mask, std::size_t stride, int width, int height,
                     std::uint32_t* out);
void column_sums_scalar(const std::uint8_t* mask, std::size_t stride, int width, int height,
                        std::uint32_t* out);

#if defined(__x86_64__) || defined(_M_X64)
void hue_from_rgb_avx2(const std::uint8_t* rgb, std::size_t n, std::uint8_t* out);
void band_mask_avx2(const std::uint8_t* hue, std::size_t n, std::uint8_t lo, std::uint8_t hi,
                    std::uint8_t* out);
void row_sums_avx2(const std::uint8_t* mask, std::size_t stride, int width, int height,
                   std::uint32_t* out);
void column_sums_avx2(const std::uint8_t* mask, std::size_t stride, int width, int height,
                      std::uint32_t* out);
#endif

}  // namespace detail

}  // namespace cope::kernels
