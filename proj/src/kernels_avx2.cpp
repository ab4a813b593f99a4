// AVX2/FMA variants of the reduction kernels. This TU is the only one built
// with -mavx2; entry is gated at runtime by __builtin_cpu_supports so the
// binary stays safe on older CPUs.
#include "morrey/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <immintrin.h>

namespace morrey::kern {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

double v_sum(const double* v, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
    double a = hsum(acc);
    for (; i < n; ++i) a += v[i];
    return a;
}

double v_dot(const double* v, const double* w, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(w + i), acc);
    double a = hsum(acc);
    for (; i < n; ++i) a += v[i] * w[i];
    return a;
}

double v_abs_pow_sum(const double* v, double p, std::size_t n) {
    if (p == 1.0) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4)
            acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(v + i), kAbsMask));
        double a = hsum(acc);
        for (; i < n; ++i) a += std::abs(v[i]);
        return a;
    }
    if (p == 2.0) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            __m256d x = _mm256_loadu_pd(v + i);
            acc = _mm256_fmadd_pd(x, x, acc);
        }
        double a = hsum(acc);
        for (; i < n; ++i) a += v[i] * v[i];
        return a;
    }
    return scalar_ops().abs_pow_sum(v, p, n);
}

double v_abs_pow_dot(const double* v, double p, const double* w, std::size_t n) {
    if (p == 1.0) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4)
            acc = _mm256_fmadd_pd(_mm256_and_pd(_mm256_loadu_pd(v + i), kAbsMask),
                                  _mm256_loadu_pd(w + i), acc);
        double a = hsum(acc);
        for (; i < n; ++i) a += std::abs(v[i]) * w[i];
        return a;
    }
    if (p == 2.0) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            __m256d x = _mm256_loadu_pd(v + i);
            acc = _mm256_fmadd_pd(_mm256_mul_pd(x, x), _mm256_loadu_pd(w + i), acc);
        }
        double a = hsum(acc);
        for (; i < n; ++i) a += v[i] * v[i] * w[i];
        return a;
    }
    return scalar_ops().abs_pow_dot(v, p, w, n);
}

double v_abs_dev_pow_sum(const double* v, double c, double p, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    if (p == 1.0) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), vc);
            acc = _mm256_add_pd(acc, _mm256_and_pd(d, kAbsMask));
        }
        double a = hsum(acc);
        for (; i < n; ++i) a += std::abs(v[i] - c);
        return a;
    }
    if (p == 2.0) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), vc);
            acc = _mm256_fmadd_pd(d, d, acc);
        }
        double a = hsum(acc);
        for (; i < n; ++i) { double d = v[i] - c; a += d * d; }
        return a;
    }
    return scalar_ops().abs_dev_pow_sum(v, c, p, n);
}

double v_abs_dev_pow_dot(const double* v, double c, double p, const double* w, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    if (p == 1.0) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), vc);
            acc = _mm256_fmadd_pd(_mm256_and_pd(d, kAbsMask), _mm256_loadu_pd(w + i), acc);
        }
        double a = hsum(acc);
        for (; i < n; ++i) a += std::abs(v[i] - c) * w[i];
        return a;
    }
    if (p == 2.0) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), vc);
            acc = _mm256_fmadd_pd(_mm256_mul_pd(d, d), _mm256_loadu_pd(w + i), acc);
        }
        double a = hsum(acc);
        for (; i < n; ++i) { double d = v[i] - c; a += d * d * w[i]; }
        return a;
    }
    return scalar_ops().abs_dev_pow_dot(v, c, p, w, n);
}

double v_max_abs(const double* v, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        m = _mm256_max_pd(m, _mm256_and_pd(_mm256_loadu_pd(v + i), kAbsMask));
    double best = 0.0;
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    for (double x : lanes) best = std::max(best, x);
    for (; i < n; ++i) best = std::max(best, std::abs(v[i]));
    return best;
}

const Ops kAvx2 = {v_sum,        v_dot,           v_abs_pow_sum, v_abs_pow_dot,
                   v_abs_dev_pow_sum, v_abs_dev_pow_dot, v_max_abs,     "avx2"};

}  // namespace

bool avx2_available() {
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
}

const Ops& avx2_ops() { return kAvx2; }

}  // namespace morrey::kern
