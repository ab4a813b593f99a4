#include "morrey/testfields.hpp"

#include <cmath>
#include <stdexcept>

#include "morrey/rng.hpp"

namespace morrey {

namespace {

// C^2 compactly supported envelope on q = |x - c| / s < 1
inline double window(double q2) {
    if (q2 >= 1.0) return 0.0;
    double t = 1.0 - q2;
    return t * t * t;
}

}  // namespace

std::vector<TestField> test_family(const Grid& g, int count, std::uint64_t seed, Point center,
                                   double half_width) {
    if (count < 1) throw std::invalid_argument("count must be positive");
    if (!(half_width > 3.0 * g.h()))
        throw std::invalid_argument("support window too small for the grid");
    Rng rng(seed);
    const char* kinds[4] = {"bump", "box", "wave", "noise"};
    std::vector<TestField> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        int kind = k % 4;
        // scale and offset keep the support strictly inside B(center, half_width)
        double s = half_width * rng.uniform(0.25, 0.55);
        if (s < 3.0 * g.h()) s = 3.0 * g.h();
        double room = std::max(half_width - s, 0.0) * 0.9;
        Point c = center;
        c[0] += rng.uniform(-room, room);
        if (g.dim() == 2) c[1] += rng.uniform(-room, room);
        double amp = rng.uniform(0.5, 2.0);
        std::vector<double> v(g.npoints(), 0.0);
        auto q2_of = [&](const Point& x) {
            double d = dist(x, c, g.dim()) / s;
            return d * d;
        };
        if (kind == 0) {
            for (int j = 0; j < g.size(1); ++j)
                for (int i = 0; i < g.size(0); ++i)
                    v[g.index(i, j)] = amp * window(q2_of(g.point(i, j)));
        } else if (kind == 1) {
            for (int j = 0; j < g.size(1); ++j)
                for (int i = 0; i < g.size(0); ++i) {
                    Point x = g.point(i, j);
                    bool in = std::abs(x[0] - c[0]) < s * 0.7;
                    if (g.dim() == 2) in = in && std::abs(x[1] - c[1]) < s * 0.7;
                    v[g.index(i, j)] = in ? amp : 0.0;
                }
        } else if (kind == 2) {
            double kappa = rng.uniform(1.0, 4.0) * 2.0 * M_PI / s;
            double theta = g.dim() == 2 ? rng.uniform(0.0, 2.0 * M_PI) : 0.0;
            double phase = rng.uniform(0.0, 2.0 * M_PI);
            double dx = std::cos(theta), dy = std::sin(theta);
            for (int j = 0; j < g.size(1); ++j)
                for (int i = 0; i < g.size(0); ++i) {
                    Point x = g.point(i, j);
                    double u = (x[0] - c[0]) * dx + (g.dim() == 2 ? (x[1] - c[1]) * dy : 0.0);
                    v[g.index(i, j)] =
                        amp * std::cos(kappa * u + phase) * window(q2_of(x));
                }
        } else {
            // raw noise on the support, box-smoothed twice, then windowed so
            // the smoothing cannot smear mass past the support boundary
            std::vector<double> raw(g.npoints(), 0.0);
            for (int j = 0; j < g.size(1); ++j)
                for (int i = 0; i < g.size(0); ++i)
                    if (q2_of(g.point(i, j)) < 1.0) raw[g.index(i, j)] = rng.normal();
            for (int pass = 0; pass < 2; ++pass) {
                std::vector<double> sm(raw.size(), 0.0);
                for (int j = 0; j < g.size(1); ++j)
                    for (int i = 0; i < g.size(0); ++i) {
                        double acc = 0.0;
                        int cnt = 0;
                        for (int dj = (g.dim() == 2 ? -1 : 0); dj <= (g.dim() == 2 ? 1 : 0);
                             ++dj)
                            for (int di = -1; di <= 1; ++di) {
                                int ii = i + di, jj = j + dj;
                                if (ii < 0 || ii >= g.size(0) || jj < 0 || jj >= g.size(1))
                                    continue;
                                acc += raw[g.index(ii, jj)];
                                ++cnt;
                            }
                        sm[g.index(i, j)] = acc / double(cnt);
                    }
                raw = std::move(sm);
            }
            for (int j = 0; j < g.size(1); ++j)
                for (int i = 0; i < g.size(0); ++i) {
                    std::size_t idx = g.index(i, j);
                    v[idx] = amp * raw[idx] * window(q2_of(g.point(i, j)));
                }
        }
        std::string label = std::string(kinds[kind]) + "#" + std::to_string(k);
        out.push_back({std::move(label), SampledField(g, std::move(v))});
    }
    return out;
}

}  // namespace morrey
