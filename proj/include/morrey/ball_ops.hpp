#pragma once

#include <cstddef>
#include <functional>

#include "morrey/field.hpp"
#include "morrey/geometry.hpp"

namespace morrey {

// Cells of a ball decompose into contiguous row spans (strict membership
// |x - c| < r, midpoint rule: a cell belongs to B iff its center does).
// All reductions below run on those spans via the kern:: backends.
template <class F>
void for_each_ball_span(const Grid& g, const Ball& b, F&& fn);

std::size_t ball_cell_count(const Grid& g, const Ball& b);

// sum over cells-in-B of v[i]          (times nothing; caller scales by volume)
double ball_sum(const Grid& g, const std::vector<double>& v, const Ball& b);
// sum of v[i]*mu[i]; mu == nullptr means 1
double ball_dot(const Grid& g, const std::vector<double>& v, const double* mu, const Ball& b);
// sum of |v[i]-shift|^p * mu[i]
double ball_abs_dev_pow_dot(const Grid& g, const std::vector<double>& v, double shift, double p,
                            const double* mu, const Ball& b);

// Midpoint-rule integral of f over B (masked cells contribute zero).
// Throws "ball under-resolved" when B captures no cell centers.
double integrate_ball(const SampledField& f, const Ball& b);

// Integral divided by the measured cell-count volume; for masked fields the
// count is the number of unmasked cells in B (the B-cap-domain convention).
double mean_ball(const SampledField& f, const Ball& b);

}  // namespace morrey

// ---- template body ---------------------------------------------------------

namespace morrey {

namespace detail {
// Index range [i0,i1) of cells with c - m < x_i < c + m (strict). The ceil
// start is then nudged by direct comparisons so fp slips in the division can
// never flip membership of a boundary cell.
inline std::pair<int, int> axis_range(double origin, double h, int n, double c, double m) {
    if (!(m > 0.0)) return {0, 0};
    int i0 = int(std::ceil((c - m - origin) / h));
    int i1 = int(std::floor((c + m - origin) / h)) + 1;
    if (i0 < 0) i0 = 0;
    if (i1 > n) i1 = n;
    while (i0 > 0 && origin + (i0 - 1) * h > c - m) --i0;
    while (i0 < n && !(origin + i0 * h > c - m)) ++i0;
    if (i1 < i0) i1 = i0;
    while (i1 < n && origin + i1 * h < c + m) ++i1;
    while (i1 > i0 && !(origin + (i1 - 1) * h < c + m)) --i1;
    return {i0, i1};
}
}  // namespace detail

template <class F>
void for_each_ball_span(const Grid& g, const Ball& b, F&& fn) {
    const double r = b.radius;
    if (g.dim() == 1) {
        auto [i0, i1] = detail::axis_range(g.origin()[0], g.h(), g.size(0), b.center[0], r);
        if (i1 > i0) fn(std::size_t(i0), std::size_t(i1 - i0));
        return;
    }
    auto [j0, j1] = detail::axis_range(g.origin()[1], g.h(), g.size(1), b.center[1], r);
    for (int j = j0; j < j1; ++j) {
        double dy = g.coord(1, j) - b.center[1];
        double m2 = r * r - dy * dy;
        if (!(m2 > 0.0)) continue;
        auto [i0, i1] =
            detail::axis_range(g.origin()[0], g.h(), g.size(0), b.center[0], std::sqrt(m2));
        if (i1 > i0) fn(g.index(i0, j), std::size_t(i1 - i0));
    }
}

}  // namespace morrey
