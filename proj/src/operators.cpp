#include "morrey/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "morrey/ball_ops.hpp"
#include "morrey/kernels.hpp"
#include "morrey/rng.hpp"

namespace morrey {

// ---- kernel factories -------------------------------------------------------

KernelSpec hilbert_kernel() {
    KernelSpec k;
    k.dim = 1;
    k.autonomous = true;
    k.name = "hilbert";
    k.deriv_bound = 1.0 / M_PI;
    k.evaluator = [](const Point&, const Point& xi) { return 1.0 / (M_PI * xi[0]); };
    return k;
}

KernelSpec riesz_even_kernel() {
    KernelSpec k;
    k.dim = 2;
    k.autonomous = true;
    k.name = "riesz_even";
    k.deriv_bound = 2.0 / M_PI;
    k.evaluator = [](const Point&, const Point& xi) {
        double r2 = xi[0] * xi[0] + xi[1] * xi[1];
        return (xi[0] * xi[0] - xi[1] * xi[1]) / (2.0 * M_PI * r2 * r2);
    };
    return k;
}

KernelSpec log_hessian_kernel(int i, int j) {
    if (i < 1 || i > 2 || j < 1 || j > 2) throw std::invalid_argument("indices must be 1 or 2");
    KernelSpec k;
    k.dim = 2;
    k.autonomous = true;
    k.name = "log_hessian_" + std::to_string(i) + std::to_string(j);
    k.deriv_bound = 2.0 / M_PI;
    k.evaluator = [i, j](const Point&, const Point& xi) {
        double r2 = xi[0] * xi[0] + xi[1] * xi[1];
        double del = (i == j) ? 1.0 : 0.0;
        return (del * r2 - 2.0 * xi[i - 1] * xi[j - 1]) / (2.0 * M_PI * r2 * r2);
    };
    return k;
}

// ---- kernel invariants ------------------------------------------------------

KernelCheck kernel_invariants(const KernelSpec& K, std::uint64_t seed) {
    if (!K.evaluator) throw std::invalid_argument("kernel has no evaluator");
    KernelCheck out;
    Rng rng(seed);
    std::vector<Point> dirs;
    std::vector<Point> xs = {{0.0, 0.0}, {0.37, -0.61}, {-1.2, 0.8}};
    if (K.dim == 1) {
        dirs = {{1.0, 0.0}, {-1.0, 0.0}};
    } else {
        const int n_quad = 512;
        dirs.reserve(n_quad);
        for (int q = 0; q < n_quad; ++q) {
            double th = 2.0 * M_PI * (q + 0.5) / n_quad;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    }
    const double dsigma = K.dim == 1 ? 1.0 : 2.0 * M_PI / double(dirs.size());
    double scale = 0.0;
    for (const Point& x : xs) {
        double mean = 0.0, abs_int = 0.0;
        for (const Point& e : dirs) {
            double v = K.evaluator(x, e);
            mean += v * dsigma;
            abs_int += std::abs(v) * dsigma;
            scale = std::max(scale, std::abs(v));
        }
        if (std::abs(mean) > std::abs(out.sphere_mean)) out.sphere_mean = mean;
        out.sphere_abs = std::max(out.sphere_abs, abs_int);
    }
    // homogeneity K(x, mu e) = mu^{-dim} K(x, e), measured against the kernel's
    // own sphere scale so zeros of K along special directions don't blow up
    // the relative defect
    std::vector<double> mus = {0.5, 2.0, 3.7, 11.0};
    std::vector<Point> hdirs;
    if (K.dim == 1) {
        hdirs = dirs;
    } else {
        hdirs = {{1.0, 0.0}, {0.0, 1.0}};
        for (int q = 0; q < 6; ++q) {
            double th = rng.uniform(0.0, 2.0 * M_PI);
            hdirs.push_back({std::cos(th), std::sin(th)});
        }
    }
    for (const Point& x : xs)
        for (const Point& e : hdirs)
            for (double mu : mus) {
                double base = K.evaluator(x, e);
                Point xe{mu * e[0], mu * e[1]};
                double got = K.evaluator(x, xe);
                double want = std::pow(mu, -double(K.dim)) * base;
                double defect = std::abs(got - want) /
                                std::max(scale * std::pow(mu, -double(K.dim)), 1e-300);
                out.worst_homogeneity = std::max(out.worst_homogeneity, defect);
            }
    out.ok = out.worst_homogeneity <= 1e-8 && std::abs(out.sphere_mean) <= K.sphere_mean_tol &&
             std::isfinite(out.sphere_abs);
    return out;
}

// ---- maximal function -------------------------------------------------------

SampledField maximal(const SampledField& f, const BallFamily& F) {
    const Grid& g = f.grid();
    std::vector<double> av(f.values().size());
    for (std::size_t i = 0; i < av.size(); ++i) {
        double m = f.has_mask() ? f.mask()[i] : 1.0;
        av[i] = std::abs(f.values()[i]) * m;
    }
    std::vector<double> radii = F.radii();
    std::vector<double> out(av.size(), 0.0);
    for (int j = 0; j < g.size(1); ++j)
        for (int i = 0; i < g.size(0); ++i) {
            Point x = g.point(i, j);
            double best = 0.0;
            for (double r : radii) {
                Ball b{x, r};
                std::size_t cnt = ball_cell_count(g, b);
                if (cnt == 0) continue;
                best = std::max(best, ball_sum(g, av, b) / double(cnt));
            }
            out[g.index(i, j)] = best;
        }
    return SampledField(g, std::move(out));
}

// ---- principal-value convolution ---------------------------------------------

namespace {

// values with the mask folded in, so masked cells contribute zero mass
std::vector<double> masked_values(const SampledField& f) {
    std::vector<double> v = f.values();
    if (f.has_mask())
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= f.mask()[i];
    return v;
}

void require_pv_kernel(const KernelSpec& K, const Grid& g) {
    if (K.dim != g.dim()) throw std::invalid_argument("kernel and field dimension mismatch");
    KernelCheck chk = kernel_invariants(K);
    if (!(std::abs(chk.sphere_mean) <= K.sphere_mean_tol))
        throw std::runtime_error(
            "kernel fails zero spherical mean: principal value undefined");
    if (!(chk.worst_homogeneity <= 1e-8))
        throw std::runtime_error("kernel is not homogeneous of degree -n");
}

inline double at_or_zero(const std::vector<double>& v, int i, int n) {
    return (i >= 0 && i < n) ? v[std::size_t(i)] : 0.0;
}

// offset table K(x, (dx, dy) h) * h^dim with the center zeroed; entry layout
// [dy + ny - 1][dx + nx - 1], rows reversed on request for unit-stride dots
std::vector<double> offset_table(const KernelSpec& K, const Grid& g, const Point& x,
                                 bool zero_near) {
    const int nx = g.size(0), ny = g.dim() == 2 ? g.size(1) : 1;
    const double h = g.h(), vol = g.cell_volume();
    const int wx = 2 * nx - 1, wy = g.dim() == 2 ? 2 * ny - 1 : 1;
    std::vector<double> W(std::size_t(wx) * wy, 0.0);
    for (int dy = -(ny - 1); dy <= ny - 1; ++dy)
        for (int dx = -(nx - 1); dx <= nx - 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (zero_near && std::abs(dx) <= 1 && std::abs(dy) <= 1) continue;
            Point xi{dx * h, g.dim() == 2 ? dy * h : 0.0};
            W[std::size_t(dy + ny - 1) * wx + (dx + nx - 1)] = K.evaluator(x, xi) * vol;
        }
    return W;
}

SampledField cz_autonomous(const KernelSpec& K, const SampledField& f) {
    const Grid& g = f.grid();
    const int nx = g.size(0), ny = g.dim() == 2 ? g.size(1) : 1;
    const double h = g.h(), vol = g.cell_volume();
    std::vector<double> fv = masked_values(f);
    std::vector<double> W = offset_table(K, g, {0.0, 0.0}, /*zero_near=*/true);
    const int wx = 2 * nx - 1;
    // reverse each row so the far-field contribution is a unit-stride dot
    std::vector<double> Wr(W.size());
    for (int row = 0; row < (g.dim() == 2 ? 2 * ny - 1 : 1); ++row)
        for (int a = 0; a < wx; ++a)
            Wr[std::size_t(row) * wx + a] = W[std::size_t(row) * wx + (wx - 1 - a)];

    const auto& ops = kern::ops();
    std::vector<double> out(fv.size(), 0.0);
    if (g.dim() == 1) {
        for (int i = 0; i < nx; ++i)
            out[std::size_t(i)] = ops.dot(&Wr[std::size_t(nx - 1 - i)], fv.data(), nx);
    } else {
        for (int j = 0; j < ny; ++j)
            for (int jj = 0; jj < ny; ++jj) {
                const double* row = &Wr[std::size_t(j - jj + ny - 1) * wx];
                const double* frow = &fv[std::size_t(jj) * nx];
                for (int i = 0; i < nx; ++i)
                    out[g.index(i, j)] += ops.dot(row + (nx - 1 - i), frow, nx);
            }
    }
    // the 3^n-neighborhood enters as symmetric pairs (principal value)
    auto kval = [&](int dx, int dy) {
        Point xi{dx * h, g.dim() == 2 ? dy * h : 0.0};
        return K.evaluator({0.0, 0.0}, xi) * vol;
    };
    std::vector<std::array<int, 2>> half;
    if (g.dim() == 1)
        half = {{1, 0}};
    else
        half = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    for (const auto& d : half) {
        double wp = kval(d[0], d[1]), wm = kval(-d[0], -d[1]);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                double a = 0.0;
                int im = i - d[0], jm = j - d[1], ip = i + d[0], jp = j + d[1];
                if (im >= 0 && im < nx && jm >= 0 && jm < ny) a += wp * fv[g.index(im, jm)];
                if (ip >= 0 && ip < nx && jp >= 0 && jp < ny) a += wm * fv[g.index(ip, jp)];
                out[g.index(i, j)] += a;
            }
    }
    return SampledField(g, std::move(out));
}

SampledField cz_variable(const KernelSpec& K, const SampledField& f) {
    const Grid& g = f.grid();
    const int nx = g.size(0), ny = g.dim() == 2 ? g.size(1) : 1;
    const double h = g.h(), vol = g.cell_volume();
    std::vector<double> fv = masked_values(f);
    std::vector<double> out(fv.size(), 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            Point x = g.point(i, j);
            double acc = 0.0;
            // half-plane of offsets: dy > 0 any dx, dy == 0 dx > 0
            for (int dy = 0; dy <= ny - 1; ++dy)
                for (int dx = (dy == 0 ? 1 : -(nx - 1)); dx <= nx - 1; ++dx) {
                    Point xi{dx * h, g.dim() == 2 ? dy * h : 0.0};
                    double pair = 0.0;
                    int im = i - dx, jm = j - dy, ip = i + dx, jp = j + dy;
                    if (im >= 0 && im < nx && jm >= 0 && jm < ny) {
                        double fy = fv[g.index(im, jm)];
                        if (fy != 0.0) pair += K.evaluator(x, xi) * fy;
                    }
                    if (ip >= 0 && ip < nx && jp >= 0 && jp < ny) {
                        double fy = fv[g.index(ip, jp)];
                        if (fy != 0.0)
                            pair += K.evaluator(x, {-xi[0], -xi[1]}) * fy;
                    }
                    acc += pair * vol;
                }
            out[g.index(i, j)] = acc;
        }
    return SampledField(g, std::move(out));
}

}  // namespace

SampledField cz_apply(const KernelSpec& K, const SampledField& f) {
    require_pv_kernel(K, f.grid());
    return K.autonomous ? cz_autonomous(K, f) : cz_variable(K, f);
}

SampledField cz_apply_cutoff(const KernelSpec& K, const SampledField& f, double eps) {
    require_pv_kernel(K, f.grid());
    if (!(eps > 0.0)) throw std::invalid_argument("cutoff must be positive");
    const Grid& g = f.grid();
    const int nx = g.size(0), ny = g.dim() == 2 ? g.size(1) : 1;
    const double h = g.h(), vol = g.cell_volume();
    std::vector<double> fv = masked_values(f);
    std::vector<double> out(fv.size(), 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            Point x = g.point(i, j);
            double acc = 0.0;
            for (int jj = 0; jj < ny; ++jj)
                for (int ii = 0; ii < nx; ++ii) {
                    double fy = fv[g.index(ii, jj)];
                    if (fy == 0.0) continue;
                    Point xi{(i - ii) * h, g.dim() == 2 ? (j - jj) * h : 0.0};
                    double d = g.dim() == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
                    if (d < eps) continue;
                    acc += K.evaluator(x, xi) * fy;
                }
            out[g.index(i, j)] = acc * vol;
        }
    return SampledField(g, std::move(out));
}

SampledField commutator_apply(const SampledField& a, const KernelSpec& K,
                              const SampledField& f) {
    require_pv_kernel(K, f.grid());
    if (!a.grid().same_layout(f.grid()))
        throw std::invalid_argument("multiplier and field live on different grids");
    const Grid& g = f.grid();
    const int nx = g.size(0), ny = g.dim() == 2 ? g.size(1) : 1;
    const double h = g.h(), vol = g.cell_volume();
    std::vector<double> fv = masked_values(f);
    const std::vector<double>& av = a.values();
    // autonomous kernels: one offset table shared by every output point
    std::vector<double> W;
    const int wx = 2 * nx - 1;
    if (K.autonomous) W = offset_table(K, g, {0.0, 0.0}, /*zero_near=*/false);
    std::vector<double> out(fv.size(), 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            Point x = g.point(i, j);
            double ax = av[g.index(i, j)];
            double acc = 0.0;
            for (int dy = 0; dy <= ny - 1; ++dy)
                for (int dx = (dy == 0 ? 1 : -(nx - 1)); dx <= nx - 1; ++dx) {
                    double pair = 0.0;
                    int im = i - dx, jm = j - dy, ip = i + dx, jp = j + dy;
                    bool mok = im >= 0 && im < nx && jm >= 0 && jm < ny;
                    bool pok = ip >= 0 && ip < nx && jp >= 0 && jp < ny;
                    if (!mok && !pok) continue;
                    double wp, wm;
                    if (K.autonomous) {
                        wp = W[std::size_t(dy + ny - 1) * wx + (dx + nx - 1)];
                        wm = W[std::size_t(-dy + ny - 1) * wx + (-dx + nx - 1)];
                    } else {
                        Point xi{dx * h, g.dim() == 2 ? dy * h : 0.0};
                        wp = K.evaluator(x, xi) * vol;
                        wm = K.evaluator(x, {-xi[0], -xi[1]}) * vol;
                    }
                    if (mok) {
                        std::size_t y = g.index(im, jm);
                        if (fv[y] != 0.0) pair += wp * (ax - av[y]) * fv[y];
                    }
                    if (pok) {
                        std::size_t y = g.index(ip, jp);
                        if (fv[y] != 0.0) pair += wm * (ax - av[y]) * fv[y];
                    }
                    acc += pair;
                }
            out[g.index(i, j)] = acc;
        }
    return SampledField(g, std::move(out));
}

// ---- reflection -------------------------------------------------------------

ReflectionMap identity_reflection(int dim) {
    ReflectionMap R;
    R.dim = dim;
    R.lambda = 1.0;
    R.coeff = [](const Point&) { return std::array<double, 3>{1.0, 0.0, 1.0}; };
    return R;
}

Point reflect_point(const ReflectionMap& R, const Point& x, const Point& y) {
    if (!R.coeff) throw std::invalid_argument("reflection has no coefficient field");
    std::array<double, 3> a = R.coeff(y);
    if (R.dim == 1) {
        if (!(a[0] >= 1.0 / R.lambda - 1e-12)) throw std::runtime_error("ellipticity violated");
        return {x[0] - 2.0 * x[0] * a[0] / a[0], 0.0};
    }
    double ann = a[2];
    if (!(ann >= 1.0 / R.lambda - 1e-12)) throw std::runtime_error("ellipticity violated");
    double xn = x[1];
    return {x[0] - 2.0 * xn * a[1] / ann, x[1] - 2.0 * xn * ann / ann};
}

Point reflect(const ReflectionMap& R, const Point& x) { return reflect_point(R, x, x); }

Point mirror(const Point& x, int dim) {
    return dim == 1 ? Point{-x[0], 0.0} : Point{x[0], -x[1]};
}

ReflectBounds reflect_bounds_check(const ReflectionMap& R, int n_samples, std::uint64_t seed,
                                   double lo, double hi) {
    Rng rng(seed);
    ReflectBounds out;
    out.c1 = std::numeric_limits<double>::infinity();
    out.c2 = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        Point x, y;
        if (R.dim == 1) {
            x = {hi * (1.0 - rng.uniform()), 0.0};
            y = {hi * (1.0 - rng.uniform()), 0.0};
        } else {
            x = {rng.uniform(lo, hi), hi * (1.0 - rng.uniform())};
            y = {rng.uniform(lo, hi), hi * (1.0 - rng.uniform())};
        }
        Point tx = reflect(R, x);
        double ratio = dist(tx, y, R.dim) / dist(mirror(x, R.dim), y, R.dim);
        out.c1 = std::min(out.c1, ratio);
        out.c2 = std::max(out.c2, ratio);
    }
    out.samples = n_samples;
    return out;
}

SampledField nonsingular_apply(const KernelSpec& K, const ReflectionMap& R,
                               const SampledField& f) {
    const Grid& g = f.grid();
    if (K.dim != g.dim()) throw std::invalid_argument("kernel and field dimension mismatch");
    if (R.dim != g.dim()) throw std::invalid_argument("reflection and field dimension mismatch");
    const double vol = g.cell_volume();
    std::vector<double> fv = masked_values(f);
    // support list: nonzero unmasked cells
    std::vector<std::pair<Point, double>> supp;
    for (int j = 0; j < g.size(1); ++j)
        for (int i = 0; i < g.size(0); ++i) {
            double v = fv[g.index(i, j)];
            if (v != 0.0) supp.push_back({g.point(i, j), v});
        }
    std::vector<double> out(fv.size(), 0.0);
    std::vector<double> mask(fv.size(), 0.0);
    const int axis = g.dim() - 1;
    for (int j = 0; j < g.size(1); ++j)
        for (int i = 0; i < g.size(0); ++i) {
            Point x = g.point(i, j);
            if (!(x[axis] > 0.0)) continue;
            mask[g.index(i, j)] = 1.0;
            Point tx = reflect(R, x);
            double acc = 0.0;
            for (const auto& [y, fy] : supp)
                acc += K.evaluator(x, {tx[0] - y[0], tx[1] - y[1]}) * fy;
            out[g.index(i, j)] = acc * vol;
        }
    return SampledField(g, std::move(out), std::move(mask));
}

SublinearityReport sublinearity_check(const SampledField& Tf, const SampledField& f,
                                      double margin,
                                      const std::function<Point(const Point&)>& xref) {
    if (!Tf.grid().same_layout(f.grid()))
        throw std::invalid_argument("fields live on different grids");
    const Grid& g = f.grid();
    const double vol = g.cell_volume();
    std::vector<double> fv = masked_values(f);
    std::vector<std::pair<Point, double>> supp;
    for (int j = 0; j < g.size(1); ++j)
        for (int i = 0; i < g.size(0); ++i) {
            double v = fv[g.index(i, j)];
            if (v != 0.0) supp.push_back({g.point(i, j), std::abs(v)});
        }
    SublinearityReport out;
    if (supp.empty()) return out;
    for (int j = 0; j < g.size(1); ++j)
        for (int i = 0; i < g.size(0); ++i) {
            std::size_t idx = g.index(i, j);
            if (Tf.has_mask() && Tf.mask()[idx] == 0.0) continue;
            Point x = g.point(i, j);
            double dmin = std::numeric_limits<double>::infinity();
            for (const auto& [y, fy] : supp) dmin = std::min(dmin, dist(x, y, g.dim()));
            if (dmin < margin) continue;
            Point xr = xref ? xref(x) : x;
            double den = 0.0;
            for (const auto& [y, fy] : supp)
                den += fy / std::pow(dist(xr, y, g.dim()), double(g.dim()));
            den *= vol;
            if (!(den > 0.0)) continue;
            out.C = std::max(out.C, std::abs(Tf.values()[idx]) / den);
            ++out.points;
        }
    return out;
}

// ---- empirical operator norms -------------------------------------------------

OpRatioReport norm_ratio_estimate(const FieldOp& T, double p, const MorreyWeightFn& phi1,
                                  const MorreyWeightFn& phi2, const Weight& w,
                                  const BallFamily& F, const std::vector<TestField>& base,
                                  const std::vector<TestField>& extension,
                                  const std::string& id) {
    OpRatioReport rep;
    rep.id = id;
    auto eval = [&](const TestField& tf) -> double {
        double den = morrey_norm(tf.field, p, phi1, w, F);
        if (!(den > 0.0)) {
            ++rep.skipped;
            rep.per_field.push_back({tf.label + " [zero norm, skipped]", 0.0});
            return -1.0;
        }
        double num = morrey_norm(T(tf.field), p, phi2, w, F);
        double ratio = num / den;
        ++rep.used;
        rep.per_field.push_back({tf.label, ratio});
        return ratio;
    };
    double base_sup = 0.0, ext_sup = 0.0;
    bool finite = true;
    for (const auto& tf : base) {
        double r = eval(tf);
        if (r < 0.0) continue;
        if (!std::isfinite(r)) finite = false;
        base_sup = std::max(base_sup, r);
    }
    ext_sup = base_sup;
    for (const auto& tf : extension) {
        double r = eval(tf);
        if (r < 0.0) continue;
        if (!std::isfinite(r)) finite = false;
        ext_sup = std::max(ext_sup, r);
    }
    rep.max_ratio = base_sup;
    rep.extended_ratio = ext_sup;
    rep.growth = base_sup > 0.0 ? (ext_sup - base_sup) / base_sup : 0.0;
    if (!finite) {
        rep.status = "FAIL";
        rep.note = "ratio not finite on some field";
    } else if (rep.used == 0) {
        rep.status = "FAIL";
        rep.note = "no usable fields (all denominators vanished)";
    } else if (rep.growth > 0.10) {
        rep.status = "INCONCLUSIVE";
        rep.note = "sup still moving under test-family extension";
    } else {
        rep.status = "PASS";
    }
    if (rep.skipped > 0 && rep.note.empty())
        rep.note = std::to_string(rep.skipped) + " field(s) skipped (zero norm)";
    return rep;
}

}  // namespace morrey
