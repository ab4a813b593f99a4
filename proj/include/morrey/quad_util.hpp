#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace morrey {

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton iteration.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre16();

// Composite Simpson over [a,b] with n subintervals (n made even internally).
double simpson(const std::function<double(double)>& f, double a, double b, int n);

// Tensor Gauss-Legendre integral of f over an axis-aligned rectangle.
double gl16_rect(const std::function<double(double, double)>& f, double x0, double x1, double y0,
                 double y1);

// integral of |t - x0|^gamma over [a,b] containing x0; +inf when gamma <= -1.
double power_cell_integral_1d(double a, double b, double x0, double gamma);

// integral of |y - corner|^gamma over [0,a]x[0,b] with the singularity at the
// origin corner: geometric-resummation trick using homogeneity of degree
// gamma+2 under dyadic scaling. +inf when gamma <= -2.
double corner_power_integral(double a, double b, double gamma);

// integral of |y - x0|^gamma over an axis-aligned cell containing x0 (2D).
double power_cell_integral_2d(double x_lo, double x_hi, double y_lo, double y_hi, double x0,
                              double y0, double gamma);

}  // namespace morrey
