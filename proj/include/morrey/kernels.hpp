#pragma once

#include <cstddef>
#include <string>

namespace morrey::kern {

// Flat reduction kernels behind every ball integral, weighted p-power sum and
// convolution row in the library. Two implementations: a scalar reference and
// an AVX2 variant; ops() picks one at runtime from CPU capabilities so the
// same binary runs on any x86-64 (and non-x86 builds keep the scalar path).
//
// |.|^p fast paths exist for p == 1 and p == 2; other exponents go through
// std::pow in scalar code on both backends.
struct Ops {
    double (*sum)(const double* v, std::size_t n);
    double (*dot)(const double* v, const double* w, std::size_t n);
    double (*abs_pow_sum)(const double* v, double p, std::size_t n);              // sum |v|^p
    double (*abs_pow_dot)(const double* v, double p, const double* w, std::size_t n);
    double (*abs_dev_pow_sum)(const double* v, double c, double p, std::size_t n);  // sum |v-c|^p
    double (*abs_dev_pow_dot)(const double* v, double c, double p, const double* w, std::size_t n);
    double (*max_abs)(const double* v, std::size_t n);
    const char* name;
};

const Ops& scalar_ops();
bool avx2_available();          // compiled in AND supported by this CPU
const Ops& avx2_ops();          // valid only when avx2_available()
const Ops& ops();               // dispatch result (env MORREYLAB_KERNELS=scalar forces reference)

}  // namespace morrey::kern
