#include "morrey/ball_ops.hpp"

#include "morrey/kernels.hpp"

namespace morrey {

void BallFamily::validate(const Grid& g, bool interior) const {
    if (centers.empty()) throw std::invalid_argument("ball family needs at least one center");
    if (!(ratio > 1.0)) throw std::invalid_argument("radius ratio must exceed 1");
    if (count < 1) throw std::invalid_argument("radius count must be positive");
    if (r_min < 4.0 * g.h() - 1e-12 * g.h())
        throw std::invalid_argument("minimum radius below resolution floor (4h)");
    if (interior && r_max() > 0.5 * g.min_extent() + 1e-12)
        throw std::invalid_argument("family radius exceeds half the grid extent");
}

BallFamily BallFamily::lattice(const Grid& g, int stride, double r_min, double ratio, int count,
                               bool interior) {
    if (stride < 1) throw std::invalid_argument("stride must be positive");
    BallFamily fam;
    fam.r_min = r_min;
    fam.ratio = ratio;
    fam.count = count;
    fam.center_stride = stride;
    fam.interior = interior;
    const double rmax = fam.r_max();
    for (int j = 0; j < g.size(1); j += (g.dim() == 2 ? stride : 1)) {
        for (int i = 0; i < g.size(0); i += stride) {
            Point c = g.point(i, j);
            if (interior) {
                bool ok = c[0] - rmax >= g.origin()[0] - 1e-12 &&
                          c[0] + rmax <= g.origin()[0] + g.extent(0) + 1e-12;
                if (g.dim() == 2)
                    ok = ok && c[1] - rmax >= g.origin()[1] - 1e-12 &&
                         c[1] + rmax <= g.origin()[1] + g.extent(1) + 1e-12;
                if (!ok) continue;
            }
            fam.centers.push_back(c);
        }
        if (g.dim() == 1) break;
    }
    if (fam.centers.empty())
        throw std::invalid_argument("no admissible centers: radii too large for the grid");
    fam.validate(g, interior);
    return fam;
}

BallFamily BallFamily::extended(const Grid& g) const {
    if (center_stride < 1)
        throw std::logic_error("extended() needs a lattice-generated family");
    int extra = int(std::ceil(std::log(2.0) / std::log(ratio) - 1e-12));
    return lattice(g, std::max(1, center_stride / 2), r_min, ratio, count + extra, interior);
}

std::size_t ball_cell_count(const Grid& g, const Ball& b) {
    std::size_t n = 0;
    for_each_ball_span(g, b, [&](std::size_t, std::size_t cnt) { n += cnt; });
    return n;
}

double ball_sum(const Grid& g, const std::vector<double>& v, const Ball& b) {
    const auto& k = kern::ops();
    double a = 0.0;
    for_each_ball_span(g, b, [&](std::size_t off, std::size_t cnt) { a += k.sum(&v[off], cnt); });
    return a;
}

double ball_dot(const Grid& g, const std::vector<double>& v, const double* mu, const Ball& b) {
    if (!mu) return ball_sum(g, v, b);
    const auto& k = kern::ops();
    double a = 0.0;
    for_each_ball_span(g, b,
                       [&](std::size_t off, std::size_t cnt) { a += k.dot(&v[off], mu + off, cnt); });
    return a;
}

double ball_abs_dev_pow_dot(const Grid& g, const std::vector<double>& v, double shift, double p,
                            const double* mu, const Ball& b) {
    const auto& k = kern::ops();
    double a = 0.0;
    for_each_ball_span(g, b, [&](std::size_t off, std::size_t cnt) {
        a += mu ? k.abs_dev_pow_dot(&v[off], shift, p, mu + off, cnt)
                : k.abs_dev_pow_sum(&v[off], shift, p, cnt);
    });
    return a;
}

double integrate_ball(const SampledField& f, const Ball& b) {
    const Grid& g = f.grid();
    if (ball_cell_count(g, b) == 0) throw std::runtime_error("ball under-resolved");
    return ball_sum(g, f.values(), b) * g.cell_volume();
}

double mean_ball(const SampledField& f, const Ball& b) {
    const Grid& g = f.grid();
    double denom;
    if (f.has_mask()) {
        denom = ball_sum(g, f.mask(), b);
    } else {
        denom = double(ball_cell_count(g, b));
    }
    if (!(denom > 0.0)) throw std::runtime_error("ball under-resolved");
    return ball_sum(g, f.values(), b) / denom;
}

}  // namespace morrey
