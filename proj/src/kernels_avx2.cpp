#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <vector>

#include "cope/kernels.hpp"

namespace cope::kernels::detail {

namespace {

// Deinterleaves 4 RGB triples starting at p (12 bytes of a 16-byte
// load) into zero-extended epi32 channel lanes.
struct Rgbx4 {
    __m128i r, g, b;
};

inline Rgbx4 load4(const std::uint8_t* p) {
    const __m128i v = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p));
    const __m128i mr = _mm_setr_epi8(0, -1, -1, -1, 3, -1, -1, -1, 6, -1, -1, -1, 9, -1, -1, -1);
    const __m128i mg = _mm_setr_epi8(1, -1, -1, -1, 4, -1, -1, -1, 7, -1, -1, -1, 10, -1, -1, -1);
    const __m128i mb = _mm_setr_epi8(2, -1, -1, -1, 5, -1, -1, -1, 8, -1, -1, -1, 11, -1, -1, -1);
    return {_mm_shuffle_epi8(v, mr), _mm_shuffle_epi8(v, mg), _mm_shuffle_epi8(v, mb)};
}

}  // namespace

void hue_from_rgb_avx2(const std::uint8_t* rgb, std::size_t n, std::uint8_t* out) {
    const __m256i zero = _mm256_setzero_si256();
    const __m256i c60 = _mm256_set1_epi32(60);
    const __m256i c120 = _mm256_set1_epi32(120);
    const __m256i c180 = _mm256_set1_epi32(180);
    const __m256 half = _mm256_set1_ps(0.5f);
    const __m256 signbit = _mm256_set1_ps(-0.0f);
    const __m256i c30 = _mm256_set1_epi32(30);

    std::size_t i = 0;
    // Each iteration loads 16 bytes at offsets 3i and 3i+12, i.e. 28
    // bytes for 8 pixels; stay 10 pixels short of the end so both loads
    // are in bounds.
    while (i + 10 <= n) {
        Rgbx4 lo = load4(rgb + 3 * i);
        Rgbx4 hi = load4(rgb + 3 * i + 12);
        __m256i r = _mm256_set_m128i(hi.r, lo.r);
        __m256i g = _mm256_set_m128i(hi.g, lo.g);
        __m256i b = _mm256_set_m128i(hi.b, lo.b);

        __m256i mx = _mm256_max_epi32(_mm256_max_epi32(r, g), b);
        __m256i mn = _mm256_min_epi32(_mm256_min_epi32(r, g), b);
        __m256i delta = _mm256_sub_epi32(mx, mn);
        __m256i chromatic = _mm256_xor_si256(_mm256_cmpeq_epi32(delta, zero),
                                             _mm256_set1_epi32(-1));

        // Branch priority matches the scalar kernel: red, then green,
        // then blue.
        __m256i is_r = _mm256_cmpeq_epi32(mx, r);
        __m256i is_g = _mm256_andnot_si256(is_r, _mm256_cmpeq_epi32(mx, g));
        __m256i is_b = _mm256_andnot_si256(_mm256_or_si256(is_r, is_g), _mm256_set1_epi32(-1));

        __m256i base = _mm256_or_si256(_mm256_and_si256(is_g, c60), _mm256_and_si256(is_b, c120));
        __m256i diff = _mm256_and_si256(is_r, _mm256_sub_epi32(g, b));
        diff = _mm256_or_si256(diff, _mm256_and_si256(is_g, _mm256_sub_epi32(b, r)));
        diff = _mm256_or_si256(diff, _mm256_and_si256(is_b, _mm256_sub_epi32(r, g)));

        // Round 30*diff/delta half away from zero. The quotient
        // magnitude never exceeds 30, so the float32 division and the
        // +0.5/floor below are exact enough to agree with the scalar
        // integer formula on every input (half-integer quotients are
        // exactly representable).
        __m256i delta_safe = _mm256_blendv_epi8(delta, _mm256_set1_epi32(1),
                                                _mm256_cmpeq_epi32(delta, zero));
        __m256 q = _mm256_div_ps(_mm256_cvtepi32_ps(_mm256_mullo_epi32(diff, c30)),
                                 _mm256_cvtepi32_ps(delta_safe));
        __m256 absq = _mm256_andnot_ps(signbit, q);
        __m256 mag = _mm256_floor_ps(_mm256_add_ps(absq, half));
        __m256 rounded = _mm256_or_ps(mag, _mm256_and_ps(q, signbit));
        __m256i qi = _mm256_cvtps_epi32(rounded);

        __m256i h = _mm256_add_epi32(base, qi);
        __m256i neg = _mm256_cmpgt_epi32(zero, h);
        h = _mm256_add_epi32(h, _mm256_and_si256(neg, c180));
        h = _mm256_and_si256(h, chromatic);

        __m128i h16 = _mm_packs_epi32(_mm256_castsi256_si128(h), _mm256_extracti128_si256(h, 1));
        __m128i h8 = _mm_packus_epi16(h16, h16);
        _mm_storel_epi64(reinterpret_cast<__m128i*>(out + i), h8);
        i += 8;
    }
    if (i < n) hue_from_rgb_scalar(rgb + 3 * i, n - i, out + i);
}

void band_mask_avx2(const std::uint8_t* hue, std::size_t n, std::uint8_t lo, std::uint8_t hi,
                    std::uint8_t* out) {
    const __m256i vlo = _mm256_set1_epi8(static_cast<char>(lo));
    const __m256i vhi = _mm256_set1_epi8(static_cast<char>(hi));
    const __m256i vone = _mm256_set1_epi8(1);
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i h = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(hue + i));
        __m256i ge = _mm256_cmpeq_epi8(_mm256_max_epu8(h, vlo), h);
        __m256i le = _mm256_cmpeq_epi8(_mm256_min_epu8(h, vhi), h);
        __m256i m = _mm256_and_si256(_mm256_and_si256(ge, le), vone);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), m);
    }
    if (i < n) band_mask_scalar(hue + i, n - i, lo, hi, out + i);
}

void row_sums_avx2(const std::uint8_t* mask, std::size_t stride, int width, int height,
                   std::uint32_t* out) {
    const __m256i zero = _mm256_setzero_si256();
    for (int y = 0; y < height; ++y) {
        const std::uint8_t* row = mask + static_cast<std::size_t>(y) * stride;
        __m256i acc = zero;
        int x = 0;
        for (; x + 32 <= width; x += 32) {
            __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + x));
            acc = _mm256_add_epi64(acc, _mm256_sad_epu8(v, zero));
        }
        alignas(32) std::uint64_t parts[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(parts), acc);
        std::uint32_t sum = static_cast<std::uint32_t>(parts[0] + parts[1] + parts[2] + parts[3]);
        for (; x < width; ++x) sum += row[x];
        out[y] = sum;
    }
}

void column_sums_avx2(const std::uint8_t* mask, std::size_t stride, int width, int height,
                      std::uint32_t* out) {
    if (width < 16) {
        column_sums_scalar(mask, stride, width, height, out);
        return;
    }
    // 0/1 bytes accumulate safely in 16-bit lanes for up to 65535 rows
    // per chunk.
    std::vector<std::uint16_t> acc16(static_cast<std::size_t>(width));
    int y = 0;
    while (y < height) {
        int chunk = std::min(height - y, 65535);
        std::fill(acc16.begin(), acc16.end(), std::uint16_t{0});
        for (int yy = y; yy < y + chunk; ++yy) {
            const std::uint8_t* row = mask + static_cast<std::size_t>(yy) * stride;
            int x = 0;
            for (; x + 16 <= width; x += 16) {
                __m128i v = _mm_loadu_si128(reinterpret_cast<const __m128i*>(row + x));
                __m256i wide = _mm256_cvtepu8_epi16(v);
                __m256i acc = _mm256_loadu_si256(reinterpret_cast<__m256i*>(acc16.data() + x));
                _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc16.data() + x),
                                    _mm256_add_epi16(acc, wide));
            }
            for (; x < width; ++x) acc16[static_cast<std::size_t>(x)] += row[x];
        }
        for (int x = 0; x < width; ++x) out[x] += acc16[static_cast<std::size_t>(x)];
        y += chunk;
    }
}

}  // namespace cope::kernels::detail

#endif  // x86_64
