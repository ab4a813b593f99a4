#include "morrey/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "morrey/quad_util.hpp"

namespace morrey {

// ---- small quadrature utilities --------------------------------------------

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre16() {
    static const auto nw = [] {
        const int n = 16;
        std::vector<double> x(n), w(n);
        for (int i = 0; i < n; ++i) {
            // Chebyshev initial guess, Newton on P_n.
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            x[i] = t;
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        return std::make_pair(x, w);
    }();
    return nw;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double gl16_rect(const std::function<double(double, double)>& f, double x0, double x1, double y0,
                 double y1) {
    const auto& [xs, ws] = gauss_legendre16();
    double cx = 0.5 * (x0 + x1), hx = 0.5 * (x1 - x0);
    double cy = 0.5 * (y0 + y1), hy = 0.5 * (y1 - y0);
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j)
            row += ws[j] * f(cx + hx * xs[i], cy + hy * xs[j]);
        s += ws[i] * row;
    }
    return s * hx * hy;
}

double power_cell_integral_1d(double a, double b, double x0, double gamma) {
    if (gamma <= -1.0) return kDivergedSentinel;
    double g1 = gamma + 1.0;
    double right = std::max(0.0, b - x0);
    double left = std::max(0.0, x0 - a);
    return (std::pow(right, g1) + std::pow(left, g1)) / g1;
}

double corner_power_integral(double a, double b, double gamma) {
    if (a <= 0.0 || b <= 0.0) return 0.0;
    if (gamma <= -2.0) return kDivergedSentinel;
    auto f = [gamma](double x, double y) { return std::pow(x * x + y * y, 0.5 * gamma); };
    // Split at the midpoints; the corner quadrant is a half-scale copy, so the
    // whole integral is (three smooth sub-rectangles) / (1 - 2^-(gamma+2)).
    double i2 = gl16_rect(f, 0.5 * a, a, 0.0, 0.5 * b);
    double i3 = gl16_rect(f, 0.0, 0.5 * a, 0.5 * b, b);
    double i4 = gl16_rect(f, 0.5 * a, a, 0.5 * b, b);
    return (i2 + i3 + i4) / (1.0 - std::pow(2.0, -(gamma + 2.0)));
}

double power_cell_integral_2d(double x_lo, double x_hi, double y_lo, double y_hi, double x0,
                              double y0, double gamma) {
    if (gamma <= -2.0) return kDivergedSentinel;
    double s = 0.0;
    s += corner_power_integral(x_hi - x0, y_hi - y0, gamma);
    s += corner_power_integral(x_hi - x0, y0 - y_lo, gamma);
    s += corner_power_integral(x0 - x_lo, y_hi - y0, gamma);
    s += corner_power_integral(x0 - x_lo, y0 - y_lo, gamma);
    return s;
}

// ---- Weight ----------------------------------------------------------------

namespace {

// Exact cell average of |x - x0|^(alpha*sigma) over the cell centered at c.
double singular_cell_average(const Grid& g, Point c, const PowerLaw& pl, double sigma) {
    double gamma = pl.alpha * sigma;
    double h2 = 0.5 * g.h();
    if (g.dim() == 1) {
        double v = power_cell_integral_1d(c[0] - h2, c[0] + h2, pl.center[0], gamma);
        return v / g.h();
    }
    double v = power_cell_integral_2d(c[0] - h2, c[0] + h2, c[1] - h2, c[1] + h2, pl.center[0],
                                      pl.center[1], gamma);
    return v / (g.h() * g.h());
}

// Grid cell containing the singular point, if any.
std::optional<std::size_t> singular_cell(const Grid& g, const PowerLaw& pl) {
    int ix = g.cell_of(0, pl.center[0]);
    if (ix < 0) return std::nullopt;
    int iy = 0;
    if (g.dim() == 2) {
        iy = g.cell_of(1, pl.center[1]);
        if (iy < 0) return std::nullopt;
    }
    return g.index(ix, iy);
}

}  // namespace

Weight::Weight(SampledField f, std::optional<PowerLaw> a)
    : field_(std::move(f)), analytic_(a) {}

Weight Weight::uniform(const Grid& g) {
    return Weight(SampledField::constant(g, 1.0), PowerLaw{0.0, g.origin()});
}

Weight Weight::power(const Grid& g, double alpha, Point center) {
    PowerLaw pl{alpha, center};
    SampledField f = SampledField::from_function(g, [&](Point x) {
        double d = dist(x, center, g.dim());
        return std::pow(d, alpha);
    });
    if (auto sc = singular_cell(g, pl)) {
        int nx = g.size(0);
        int ix = int(*sc % nx), iy = int(*sc / nx);
        f.values()[*sc] = singular_cell_average(g, g.point(ix, iy), pl, 1.0);
    }
    Weight w(std::move(f), pl);
    for (double v : w.values())
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("power weight not positive on grid (alpha too negative?)");
    return w;
}

Weight Weight::from_field(SampledField f) {
    for (std::size_t i = 0; i < f.values().size(); ++i) {
        bool unmasked = !f.has_mask() || f.mask()[i] == 1.0;
        if (unmasked && !(f.values()[i] > 0.0))
            throw std::invalid_argument("weight must be strictly positive at unmasked cells");
    }
    return Weight(std::move(f), std::nullopt);
}

const std::vector<double>& Weight::pow_values(double sigma) const {
    auto it = pow_cache_.find(sigma);
    if (it != pow_cache_.end()) return it->second;
    const Grid& g = grid();
    std::vector<double> pv(field_.values().size());
    if (analytic_) {
        // Recompute from the descriptor so (w^sigma) is exact where sampled
        // values were themselves cell averages.
        for (int j = 0; j < g.size(1); ++j)
            for (int i = 0; i < g.size(0); ++i) {
                double d = dist(g.point(i, j), analytic_->center, g.dim());
                pv[g.index(i, j)] = std::pow(d, analytic_->alpha * sigma);
            }
        if (auto sc = singular_cell(g, *analytic_)) {
            int nx = g.size(0);
            int ix = int(*sc % nx), iy = int(*sc / nx);
            pv[*sc] = singular_cell_average(g, g.point(ix, iy), *analytic_, sigma);
        }
    } else {
        for (std::size_t i = 0; i < pv.size(); ++i) pv[i] = std::pow(field_.values()[i], sigma);
    }
    return pow_cache_.emplace(sigma, std::move(pv)).first->second;
}

double Weight::measure(const Ball& b) const { return pow_measure(b, 1.0); }

double Weight::pow_measure(const Ball& b, double sigma) const {
    const Grid& g = grid();
    double s = ball_sum(g, pow_values(sigma), b);
    return s * g.cell_volume();
}

double Weight::measure_extrapolated(const Ball& b) const {
    if (!analytic_) {
        // Tabulated-only: require the ball to stay on the grid.
        const Grid& g = grid();
        bool inside = b.center[0] - b.radius >= g.origin()[0] - 0.5 * g.h() &&
                      b.center[0] + b.radius <= g.origin()[0] + g.extent(0) + 0.5 * g.h();
        if (g.dim() == 2)
            inside = inside && b.center[1] - b.radius >= g.origin()[1] - 0.5 * g.h() &&
                     b.center[1] + b.radius <= g.origin()[1] + g.extent(1) + 0.5 * g.h();
        if (!inside)
            throw std::runtime_error("weight tabulated only on grid; ball leaves the grid");
        return measure(b);
    }
    const PowerLaw& pl = *analytic_;
    const int dim = grid().dim();
    const double alpha = pl.alpha;
    const double s = b.radius;
    const double d = dist(b.center, pl.center, dim);
    if (alpha == 0.0) return dim == 1 ? 2.0 * s : M_PI * s * s;
    if (dim == 1) {
        // closed form: integral of |x-x0|^alpha over [c-s, c+s]
        double a = b.center[0] - s - pl.center[0];
        double bb = b.center[0] + s - pl.center[0];
        if (alpha <= -1.0 && a < 0.0 && bb > 0.0) return kDivergedSentinel;
        auto F = [alpha](double t) {
            return (t >= 0 ? 1.0 : -1.0) * std::pow(std::abs(t), alpha + 1.0) / (alpha + 1.0);
        };
        return F(bb) - F(a);
    }
    if (alpha <= -2.0 && d < s) return kDivergedSentinel;
    // Radial arc-length form: w(B_s(c)) = 2*int rho^{alpha+1} theta(rho) drho,
    // theta = pi on the fully-enclosed range, arccos(...) on the partial arc.
    // Cached per center on a log-radius grid (log-log interpolation).
    auto key = std::make_pair(b.center[0], b.center[1]);
    auto eval = [&](double radius) {
        double full = 0.0;
        if (radius > d) {
            double up = radius - d;
            full = 2.0 * M_PI * std::pow(up, alpha + 2.0) / (alpha + 2.0);
        }
        double lo = std::abs(radius - d), hi = radius + d;
        if (d <= 0.0 || hi <= lo) return full;
        auto th = [&](double rho) {
            if (rho <= 0.0) return 0.0;
            double cosv = (d * d + rho * rho - radius * radius) / (2.0 * d * rho);
            cosv = std::clamp(cosv, -1.0, 1.0);
            return 2.0 * std::pow(rho, alpha + 1.0) * std::acos(cosv);
        };
        return full + simpson(th, lo, hi, 512);
    };
    if (d == 0.0) return 2.0 * M_PI * std::pow(s, alpha + 2.0) / (alpha + 2.0);
    auto& prof = profile_cache_[key];
    if (prof.log_s.empty() || std::log(s) < prof.log_s.front() || std::log(s) > prof.log_s.back()) {
        // (Re)build covering 2^-16 .. 2^20 around the requested radius scale.
        double lo = std::log(s) - 16.0 * std::log(2.0);
        double hi = std::log(s) + 20.0 * std::log(2.0);
        if (!prof.log_s.empty()) {
            lo = std::min(lo, prof.log_s.front());
            hi = std::max(hi, prof.log_s.back());
        }
        int n = int(std::ceil((hi - lo) / (std::log(2.0) / 16.0)));
        prof.log_s.resize(n + 1);
        prof.log_w.resize(n + 1);
        for (int i = 0; i <= n; ++i) {
            double ls = lo + (hi - lo) * i / n;
            prof.log_s[i] = ls;
            prof.log_w[i] = std::log(eval(std::exp(ls)));
        }
    }
    double ls = std::log(s);
    auto it = std::lower_bound(prof.log_s.begin(), prof.log_s.end(), ls);
    if (it == prof.log_s.begin()) return std::exp(prof.log_w.front());
    if (it == prof.log_s.end()) return std::exp(prof.log_w.back());
    std::size_t i1 = it - prof.log_s.begin(), i0 = i1 - 1;
    double t = (ls - prof.log_s[i0]) / (prof.log_s[i1] - prof.log_s[i0]);
    return std::exp((1.0 - t) * prof.log_w[i0] + t * prof.log_w[i1]);
}

// ---- A_p -------------------------------------------------------------------

ApReport ap_characteristic(const Weight& w, double p, const BallFamily& F) {
    if (!(p > 1.0)) throw std::invalid_argument("A_p characteristic needs p > 1");
    const Grid& g = w.grid();
    const double sigma = -1.0 / (p - 1.0);
    const auto& wv = w.pow_values(1.0);
    const auto& sv = w.pow_values(sigma);

    ApReport rep;
    rep.p = p;
    rep.characteristic = 0.0;
    for (const Ball& b : F.balls()) {
        double cnt = double(ball_cell_count(g, b));
        if (cnt == 0.0) throw std::runtime_error("ball under-resolved");
        double sw = ball_sum(g, wv, b);
        double ss = ball_sum(g, sv, b);
        double local;
        if (!std::isfinite(sw) || !std::isfinite(ss) || sw > kOverflowGuard ||
            ss > kOverflowGuard) {
            local = kDivergedSentinel;
        } else {
            local = (sw / cnt) * std::pow(ss / cnt, p - 1.0);
        }
        rep.per_ball.push_back({b, local});
        if (local > rep.characteristic) {
            rep.characteristic = local;
            rep.argmax = b;
        }
        if (!std::isfinite(local) && !rep.diverged) {
            rep.diverged = true;
            std::ostringstream os;
            os << "not in A_p at ball center=(" << b.center[0];
            if (g.dim() == 2) os << "," << b.center[1];
            os << ") radius=" << b.radius;
            rep.note = os.str();
        }
    }
    if (rep.diverged) rep.characteristic = kDivergedSentinel;
    return rep;
}

PropertyReport ap_property_suite(const Weight& w, double p, const BallFamily& F) {
    const Grid& g = w.grid();
    PropertyReport rep;
    ApReport ap = ap_characteristic(w, p, F);

    {  // (1) per-ball normalization: 1 <= local^{1/p} <= characteristic^{1/p}
        double minv = kDivergedSentinel, maxv = 0.0;
        for (const auto& bv : ap.per_ball) {
            minv = std::min(minv, bv.value);
            maxv = std::max(maxv, bv.value);
        }
        bool ok = std::isfinite(ap.characteristic) && minv >= 1.0 - 1e-9 &&
                  maxv <= ap.characteristic * (1.0 + 1e-12);
        std::ostringstream d;
        d << "min local=" << minv << " max local=" << maxv << " char=" << ap.characteristic;
        rep.items.push_back({"ap_local_bounds", ok ? "PASS" : "FAIL", minv, d.str()});
    }

    try {  // (2) duality: [w^{-1/(p-1)}]_{A_{p'}} == [w]_{A_p}^{1/(p-1)}
        double pp = p / (p - 1.0);
        Weight dual = w.descriptor()
                          ? Weight::power(g, -w.descriptor()->alpha / (p - 1.0),
                                          w.descriptor()->center)
                          : Weight::from_field(SampledField(
                                g, w.pow_values(-1.0 / (p - 1.0))));
        ApReport da = ap_characteristic(dual, pp, F);
        double expect = std::pow(ap.characteristic, 1.0 / (p - 1.0));
        double gap = std::abs(da.characteristic - expect) / std::max(expect, 1e-300);
        std::ostringstream d;
        d << "dual char=" << da.characteristic << " expected=" << expect << " rel gap=" << gap;
        rep.items.push_back({"ap_duality_gap", gap <= 0.02 ? "PASS" : "FAIL", gap, d.str()});
    } catch (const std::exception& e) {
        rep.items.push_back({"ap_duality_gap", "INFO", kDivergedSentinel,
                             std::string("dual weight not constructible: ") + e.what()});
    }

    {  // (3) characteristic across p: measured both ways, ordering reported only
        double q = 1.0 + 0.5 * (p - 1.0);
        ApReport aq = ap_characteristic(w, q, F);
        std::ostringstream d;
        d << "[w]_{A_" << q << "}=" << aq.characteristic << " [w]_{A_" << p
          << "}=" << ap.characteristic << " observed: "
          << (aq.characteristic >= ap.characteristic ? "smaller p gives larger constant"
                                                     : "larger p gives larger constant");
        rep.items.push_back({"ap_class_ordering", "INFO", aq.characteristic, d.str()});
    }

    {  // (4) doubling: w(lambda B) <= lambda^{np} [w]_{A_p} w(B)
        double worst = 0.0;
        int checked = 0, skipped = 0;
        for (const auto& bv : ap.per_ball) {
            for (double lam : {2.0, 4.0}) {
                Ball big{bv.ball.center, lam * bv.ball.radius};
                bool inside = big.center[0] - big.radius >= g.origin()[0] - 1e-12 &&
                              big.center[0] + big.radius <= g.origin()[0] + g.extent(0) + 1e-12;
                if (g.dim() == 2)
                    inside = inside &&
                             big.center[1] - big.radius >= g.origin()[1] - 1e-12 &&
                             big.center[1] + big.radius <= g.origin()[1] + g.extent(1) + 1e-12;
                if (!inside) {
                    ++skipped;
                    continue;
                }
                double lhs = w.measure(big);
                double rhs = std::pow(lam, g.dim() * p) * ap.characteristic * w.measure(bv.ball);
                worst = std::max(worst, lhs / rhs);
                ++checked;
            }
        }
        std::ostringstream d;
        d << "max w(lB)/(l^{np}[w]w(B))=" << worst << " checked=" << checked
          << " skipped(off-grid)=" << skipped;
        bool ok = checked > 0 && worst <= 1.0 + 1e-9;
        rep.items.push_back({"ap_doubling_bound", ok ? "PASS" : "FAIL", worst, d.str()});
    }

    {  // (5) measure comparison: lower bound with 1/[w], fitted upper exponent
        std::vector<double> deltas;
        double lb_margin = kDivergedSentinel;
        int centers_used = 0;
        for (std::size_t ci = 0; ci < F.centers.size() && centers_used < 5;
             ci += std::max<std::size_t>(1, F.centers.size() / 5), ++centers_used) {
            Ball B{F.centers[ci], F.r_max()};
            double wB = w.measure(B);
            double volB = double(ball_cell_count(g, B)) * g.cell_volume();
            std::vector<double> lx, ly;
            for (int k = 0; k <= 8; ++k) {
                double r = B.radius * std::pow(0.5, (8 - k) / 2.0);
                if (r < 4.0 * g.h()) continue;
                Ball E{B.center, r};
                double wE = w.measure(E);
                double volE = double(ball_cell_count(g, E)) * g.cell_volume();
                double ratio_w = wE / wB, ratio_v = volE / volB;
                lb_margin = std::min(lb_margin, ratio_w - ratio_v / ap.characteristic);
                lx.push_back(std::log(ratio_v));
                ly.push_back(std::log(ratio_w));
            }
            if (lx.size() >= 3) {
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                for (std::size_t i = 0; i < lx.size(); ++i) {
                    sx += lx[i];
                    sy += ly[i];
                    sxx += lx[i] * lx[i];
                    sxy += lx[i] * ly[i];
                }
                double n = double(lx.size());
                deltas.push_back((n * sxy - sx * sy) / (n * sxx - sx * sx));
            }
        }
        std::sort(deltas.begin(), deltas.end());
        double delta = deltas.empty() ? 0.0 : deltas[deltas.size() / 2];
        bool ok = !deltas.empty() && lb_margin >= -1e-9 && delta > 0.0;
        std::ostringstream d;
        d << "fitted delta=" << delta << " lower-bound margin=" << lb_margin;
        rep.items.push_back({"ap_embedding_delta", ok ? "PASS" : "FAIL", delta, d.str()});
    }

    rep.items.push_back({"ap_ainfty", "SKIPPED", 0.0,
                         "A_infty comparison out of scope for this build"});
    return rep;
}

}  // namespace morrey
