#include "morrey/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace morrey::kern {

namespace {

double s_sum(const double* v, std::size_t n) {
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) a += v[i];
    return a;
}

double s_dot(const double* v, const double* w, std::size_t n) {
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) a += v[i] * w[i];
    return a;
}

double s_abs_pow_sum(const double* v, double p, std::size_t n) {
    double a = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < n; ++i) a += std::abs(v[i]);
    } else if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) a += v[i] * v[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) a += std::pow(std::abs(v[i]), p);
    }
    return a;
}

double s_abs_pow_dot(const double* v, double p, const double* w, std::size_t n) {
    double a = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < n; ++i) a += std::abs(v[i]) * w[i];
    } else if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) a += v[i] * v[i] * w[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) a += std::pow(std::abs(v[i]), p) * w[i];
    }
    return a;
}

double s_abs_dev_pow_sum(const double* v, double c, double p, std::size_t n) {
    double a = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < n; ++i) a += std::abs(v[i] - c);
    } else if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) { double d = v[i] - c; a += d * d; }
    } else {
        for (std::size_t i = 0; i < n; ++i) a += std::pow(std::abs(v[i] - c), p);
    }
    return a;
}

double s_abs_dev_pow_dot(const double* v, double c, double p, const double* w, std::size_t n) {
    double a = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < n; ++i) a += std::abs(v[i] - c) * w[i];
    } else if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) { double d = v[i] - c; a += d * d * w[i]; }
    } else {
        for (std::size_t i = 0; i < n; ++i) a += std::pow(std::abs(v[i] - c), p) * w[i];
    }
    return a;
}

double s_max_abs(const double* v, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

const Ops kScalar = {s_sum,        s_dot,           s_abs_pow_sum, s_abs_pow_dot,
                     s_abs_dev_pow_sum, s_abs_dev_pow_dot, s_max_abs,     "scalar"};

}  // namespace

const Ops& scalar_ops() { return kScalar; }

#if !MORREY_HAVE_AVX2
bool avx2_available() { return false; }
const Ops& avx2_ops() { return kScalar; }
#endif

const Ops& ops() {
    static const Ops* chosen = [] {
        const char* env = std::getenv("MORREYLAB_KERNELS");
        if (env && std::string(env) == "scalar") return &kScalar;
        if (avx2_available()) return &avx2_ops();
        return &kScalar;
    }();
    return *chosen;
}

}  // namespace morrey::kern
