#include "morrey/elliptic.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "morrey/ball_ops.hpp"
#include "morrey/operators.hpp"

namespace morrey {

namespace {

double clampd(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// stencil weights at one node, indexed (dj+1)*3 + (di+1)
std::array<double, 9> stencil_at(const EllipticProblem& P, std::size_t k) {
    const double h = P.grid.h();
    const double s11 = P.a11[k] / (h * h);
    const double s22 = P.a22[k] / (h * h);
    const double s12 = P.a12[k] / (2.0 * h * h);  // 2 a12 * (cross difference / 4h^2)
    const double t1 = P.b1[k] / (2.0 * h);
    const double t2 = P.b2[k] / (2.0 * h);
    std::array<double, 9> w{};
    w[4] = -2.0 * s11 - 2.0 * s22 + P.c[k];
    w[5] = s11 + t1;  // (+1, 0)
    w[3] = s11 - t1;  // (-1, 0)
    w[7] = s22 + t2;  // (0, +1)
    w[1] = s22 - t2;  // (0, -1)
    w[8] = s12;       // (+1, +1)
    w[0] = s12;       // (-1, -1)
    w[6] = -s12;      // (-1, +1)
    w[2] = -s12;      // (+1, -1)
    return w;
}

std::function<double(const Point&, double)> const_fn(double v) {
    return [v](const Point&, double) { return v; };
}

}  // namespace

// ---- problem description ---------------------------------------------------------

void EllipticProblem::validate() const {
    if (grid.dim() != 2) throw std::invalid_argument("elliptic problems are 2D");
    const std::size_t n = grid.npoints();
    for (const auto* v : {&a11, &a12, &a22, &b1, &b2, &c, &f})
        if (v->size() != n)
            throw std::invalid_argument("coefficient arrays do not match the grid");
    if (!(lambda >= 1.0)) throw std::invalid_argument("ellipticity constant must be >= 1");
    for (std::size_t k = 0; k < n; ++k) {
        const double tr = a11[k] + a22[k];
        const double det = a11[k] * a22[k] - a12[k] * a12[k];
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
        const double mn = 0.5 * (tr - disc), mx = 0.5 * (tr + disc);
        if (!(mn >= 1.0 / lambda - 1e-12 && mx <= lambda + 1e-12))
            throw std::runtime_error("ellipticity violated on the coefficient grid");
    }
}

ProblemRecipe recipe_identity() {
    ProblemRecipe R;
    R.name = "identity";
    R.lambda = 1.0;
    R.a11 = R.a22 = const_fn(1.0);
    R.a12 = R.b1 = R.b2 = R.c = const_fn(0.0);
    return R;
}

ProblemRecipe recipe_diag() {
    ProblemRecipe R;
    R.name = "diag21";
    R.lambda = 2.0;
    R.a11 = const_fn(2.0);
    R.a22 = const_fn(1.0);
    R.a12 = R.b1 = R.b2 = R.c = const_fn(0.0);
    return R;
}

ProblemRecipe recipe_smooth_variable() {
    ProblemRecipe R;
    R.name = "smooth_variable";
    R.lambda = 4.0;
    R.a11 = [](const Point& x, double) { return 1.5 + 0.5 * std::sin(M_PI * x[0]) * std::cos(M_PI * x[1]); };
    R.a22 = [](const Point& x, double) { return 1.5 + 0.5 * std::cos(2.0 * M_PI * x[0]) * std::sin(M_PI * x[1]); };
    R.a12 = [](const Point& x, double) { return 0.25 * std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]); };
    R.b1 = [](const Point& x, double) { return 0.5 * std::cos(M_PI * x[1]); };
    R.b2 = [](const Point& x, double) { return -0.3 * std::sin(M_PI * x[0]); };
    R.c = [](const Point& x, double) { return -0.5 - 0.4 * std::sin(M_PI * (x[0] + x[1])); };
    return R;
}

ProblemRecipe recipe_vmo_log(Point x0) {
    ProblemRecipe R;
    R.name = "vmo_log";
    R.lambda = 4.0;
    R.a11 = [x0](const Point& x, double h) {
        // oscillation in ln(-ln s) slows as s -> 0; freezing s below 2h keeps
        // the sampled oscillation modulus faithful for radii >= 4h
        double s = clampd(dist(x, x0, 2), std::max(2.0 * h, 1e-9), 0.9);
        return 2.0 + std::sin(std::log(-std::log(s)));
    };
    R.a22 = const_fn(1.0);
    R.a12 = R.b1 = R.b2 = R.c = const_fn(0.0);
    return R;
}

Grid interior_grid(int m) {
    if (m < 32) throw std::invalid_argument("mesh must have at least 32 cells per side");
    const double h = 1.0 / m;
    return Grid::square({h, h}, h, m - 1, m - 1);
}

EllipticProblem assemble(const ProblemRecipe& R, const std::function<double(const Point&)>& f,
                         int m) {
    if (!R.a11 || !R.a22) throw std::invalid_argument("recipe missing principal coefficients");
    if (!f) throw std::invalid_argument("missing right-hand side");
    Grid g = interior_grid(m);
    const double h = g.h();
    const std::size_t n = g.npoints();
    EllipticProblem P{g, {}, {}, {}, {}, {}, {}, {}, R.lambda};
    P.a11.resize(n);
    P.a12.resize(n);
    P.a22.resize(n);
    P.b1.resize(n);
    P.b2.resize(n);
    P.c.resize(n);
    P.f.resize(n);
    for (int j = 0; j < g.size(1); ++j)
        for (int i = 0; i < g.size(0); ++i) {
            const std::size_t k = g.index(i, j);
            const Point x = g.point(i, j);
            P.a11[k] = R.a11(x, h);
            P.a22[k] = R.a22(x, h);
            P.a12[k] = R.a12 ? R.a12(x, h) : 0.0;
            P.b1[k] = R.b1 ? R.b1(x, h) : 0.0;
            P.b2[k] = R.b2 ? R.b2(x, h) : 0.0;
            P.c[k] = R.c ? R.c(x, h) : 0.0;
            P.f[k] = f(x);
        }
    P.validate();
    return P;
}

// ---- solver -----------------------------------------------------------------------

SampledField solve_dirichlet(const EllipticProblem& P) {
    P.validate();
    const Grid& g = P.grid;
    const int nx = g.size(0), ny = g.size(1);
    const int n = static_cast<int>(g.npoints());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(9) * n);
    Eigen::VectorXd rhs(n);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = g.index(i, j);
            const auto w = stencil_at(P, k);
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;  // zero boundary
                    trip.emplace_back(static_cast<int>(k),
                                      static_cast<int>(g.index(ii, jj)),
                                      w[(dj + 1) * 3 + (di + 1)]);
                }
            rhs(static_cast<int>(k)) = P.f[k];
        }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("sparse factorization failed for the assembled stencil");
    Eigen::VectorXd u = lu.solve(rhs);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("sparse solve failed after factorization");
    const double resid = (A * u - rhs).lpNorm<Eigen::Infinity>();
    const Eigen::VectorXd rowsum = A.cwiseAbs() * Eigen::VectorXd::Ones(n);
    const double scale =
        rhs.lpNorm<Eigen::Infinity>() + rowsum.maxCoeff() * u.lpNorm<Eigen::Infinity>();
    if (resid > 1e-10 * std::max(scale, 1e-30))
        throw std::runtime_error("solver residual above tolerance");
    return SampledField(g, std::vector<double>(u.data(), u.data() + n));
}

SampledField apply_operator(const EllipticProblem& P, const SampledField& u) {
    P.validate();
    if (!P.grid.same_layout(u.grid()))
        throw std::invalid_argument("field and problem live on different grids");
    const Grid& g = P.grid;
    const int nx = g.size(0), ny = g.size(1);
    std::vector<double> out(g.npoints(), 0.0);
    const std::vector<double>& v = u.values();
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = g.index(i, j);
            const auto w = stencil_at(P, k);
            double acc = 0.0;
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
                    acc += w[(dj + 1) * 3 + (di + 1)] * v[g.index(ii, jj)];
                }
            out[k] = acc;
        }
    return SampledField(g, std::move(out));
}

// ---- finite differences ---------------------------------------------------------------

namespace {

// one-dimensional pass along `axis` with a 3-point centered rule inside and
// second-order one-sided rules at the ends
void d1_pass(const Grid& g, const std::vector<double>& v, std::vector<double>& out, int axis) {
    const double h = g.h();
    const int n = g.size(axis);
    const int m = (g.dim() == 2) ? g.size(1 - axis) : 1;
    for (int t = 0; t < m; ++t) {
        auto idx = [&](int q) {
            if (g.dim() == 1) return g.index(q, 0);
            return axis == 0 ? g.index(q, t) : g.index(t, q);
        };
        for (int q = 0; q < n; ++q) {
            double d;
            if (q == 0)
                d = (-3.0 * v[idx(0)] + 4.0 * v[idx(1)] - v[idx(2)]) / (2.0 * h);
            else if (q == n - 1)
                d = (3.0 * v[idx(n - 1)] - 4.0 * v[idx(n - 2)] + v[idx(n - 3)]) / (2.0 * h);
            else
                d = (v[idx(q + 1)] - v[idx(q - 1)]) / (2.0 * h);
            out[idx(q)] = d;
        }
    }
}

void d2_pass(const Grid& g, const std::vector<double>& v, std::vector<double>& out, int axis) {
    const double h = g.h();
    const double h2 = h * h;
    const int n = g.size(axis);
    const int m = (g.dim() == 2) ? g.size(1 - axis) : 1;
    for (int t = 0; t < m; ++t) {
        auto idx = [&](int q) {
            if (g.dim() == 1) return g.index(q, 0);
            return axis == 0 ? g.index(q, t) : g.index(t, q);
        };
        for (int q = 0; q < n; ++q) {
            double d;
            if (q == 0)
                d = (2.0 * v[idx(0)] - 5.0 * v[idx(1)] + 4.0 * v[idx(2)] - v[idx(3)]) / h2;
            else if (q == n - 1)
                d = (2.0 * v[idx(n - 1)] - 5.0 * v[idx(n - 2)] + 4.0 * v[idx(n - 3)] -
                     v[idx(n - 4)]) /
                    h2;
            else
                d = (v[idx(q + 1)] - 2.0 * v[idx(q)] + v[idx(q - 1)]) / h2;
            out[idx(q)] = d;
        }
    }
}

}  // namespace

SampledField fd_derivative(const SampledField& u, int axis) {
    const Grid& g = u.grid();
    if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("axis out of range");
    std::vector<double> out(g.npoints(), 0.0);
    d1_pass(g, u.values(), out, axis);
    return SampledField(g, std::move(out));
}

SampledField fd_second(const SampledField& u, int i, int j) {
    const Grid& g = u.grid();
    if (i < 0 || i >= g.dim() || j < 0 || j >= g.dim())
        throw std::invalid_argument("axis out of range");
    if (i == j) {
        std::vector<double> out(g.npoints(), 0.0);
        d2_pass(g, u.values(), out, i);
        return SampledField(g, std::move(out));
    }
    return fd_derivative(fd_derivative(u, i), j);
}

SampledField gradient_magnitude(const SampledField& u) {
    const Grid& g = u.grid();
    SampledField dx = fd_derivative(u, 0);
    if (g.dim() == 1) return dx.map([](double v) { return std::abs(v); });
    SampledField dy = fd_derivative(u, 1);
    std::vector<double> out(g.npoints());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = std::hypot(dx.values()[k], dy.values()[k]);
    return SampledField(g, std::move(out));
}

SampledField hessian_magnitude(const SampledField& u, bool exclude_boundary_layer) {
    const Grid& g = u.grid();
    std::vector<double> out(g.npoints());
    if (g.dim() == 1) {
        SampledField dxx = fd_second(u, 0, 0);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::abs(dxx.values()[k]);
    } else {
        SampledField dxx = fd_second(u, 0, 0);
        SampledField dyy = fd_second(u, 1, 1);
        SampledField dxy = fd_second(u, 0, 1);
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double a = dxx.values()[k], b = dxy.values()[k], c = dyy.values()[k];
            out[k] = std::sqrt(a * a + 2.0 * b * b + c * c);
        }
    }
    if (!exclude_boundary_layer) return SampledField(g, std::move(out));
    std::vector<double> mask(g.npoints(), 1.0);
    const int nx = g.size(0), ny = (g.dim() == 2) ? g.size(1) : 1;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const bool edge = (i == 0 || i == nx - 1) ||
                              (g.dim() == 2 && (j == 0 || j == ny - 1));
            if (!edge) continue;
            const std::size_t k = g.index(i, j);
            mask[k] = 0.0;
            out[k] = 0.0;
        }
    return SampledField(g, std::move(out), std::move(mask));
}

// ---- manufactured solutions -----------------------------------------------------------

SmoothFn sine_product() {
    SmoothFn s;
    s.u = [](const Point& x) { return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]); };
    s.ux = [](const Point& x) { return M_PI * std::cos(M_PI * x[0]) * std::sin(M_PI * x[1]); };
    s.uy = [](const Point& x) { return M_PI * std::sin(M_PI * x[0]) * std::cos(M_PI * x[1]); };
    s.uxx = [](const Point& x) {
        return -M_PI * M_PI * std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
    };
    s.uyy = s.uxx;
    s.uxy = [](const Point& x) {
        return M_PI * M_PI * std::cos(M_PI * x[0]) * std::cos(M_PI * x[1]);
    };
    return s;
}

SmoothFn poly_bubble() {
    SmoothFn s;
    s.u = [](const Point& x) { return x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]); };
    s.ux = [](const Point& x) { return (1.0 - 2.0 * x[0]) * x[1] * (1.0 - x[1]); };
    s.uy = [](const Point& x) { return x[0] * (1.0 - x[0]) * (1.0 - 2.0 * x[1]); };
    s.uxx = [](const Point& x) { return -2.0 * x[1] * (1.0 - x[1]); };
    s.uyy = [](const Point& x) { return -2.0 * x[0] * (1.0 - x[0]); };
    s.uxy = [](const Point& x) { return (1.0 - 2.0 * x[0]) * (1.0 - 2.0 * x[1]); };
    return s;
}

MMSReport mms_convergence(const ProblemRecipe& R, const SmoothFn& exact,
                          const std::vector<int>& meshes) {
    if (!exact.u || !exact.ux || !exact.uy || !exact.uxx || !exact.uxy || !exact.uyy)
        throw std::invalid_argument("manufactured solution needs all derivatives");
    MMSReport rep;
    rep.meshes = meshes;
    for (int m : meshes) {
        const double h = 1.0 / m;
        auto f = [&](const Point& x) {
            const double a11 = R.a11(x, h);
            const double a22 = R.a22(x, h);
            const double a12 = R.a12 ? R.a12(x, h) : 0.0;
            const double b1 = R.b1 ? R.b1(x, h) : 0.0;
            const double b2 = R.b2 ? R.b2(x, h) : 0.0;
            const double c = R.c ? R.c(x, h) : 0.0;
            return a11 * exact.uxx(x) + 2.0 * a12 * exact.uxy(x) + a22 * exact.uyy(x) +
                   b1 * exact.ux(x) + b2 * exact.uy(x) + c * exact.u(x);
        };
        EllipticProblem P = assemble(R, f, m);
        SampledField u = solve_dirichlet(P);
        double err = 0.0;
        for (int j = 0; j < P.grid.size(1); ++j)
            for (int i = 0; i < P.grid.size(0); ++i)
                err = std::max(err, std::abs(u.values()[P.grid.index(i, j)] -
                                             exact.u(P.grid.point(i, j))));
        rep.max_err.push_back(err);
    }
    for (std::size_t k = 0; k + 1 < rep.max_err.size(); ++k)
        rep.ratios.push_back(rep.max_err[k] /
                             std::max(rep.max_err[k + 1], 1e-300));
    return rep;
}

// ---- second-derivative representation ----------------------------------------------------

RepresentationReport representation_check(const SampledField& v, int i, int j) {
    const Grid& g = v.grid();
    if (g.dim() != 2) throw std::invalid_argument("representation check requires a 2D field");
    if (i < 0 || i > 1 || j < 0 || j > 1)
        throw std::invalid_argument("component indices must be 0 or 1");

    SampledField dxx = fd_second(v, 0, 0);
    SampledField dyy = fd_second(v, 1, 1);
    std::vector<double> lap(g.npoints());
    for (std::size_t k = 0; k < lap.size(); ++k) lap[k] = dxx.values()[k] + dyy.values()[k];
    SampledField lapf(g, lap);
    SampledField conv = cz_apply(log_hessian_kernel(i + 1, j + 1), lapf);

    // unit-circle correction: gradient of the log potential against y_i
    const int M = 512;
    double s = 0.0;
    for (int q = 0; q < M; ++q) {
        const double th = 2.0 * M_PI * (q + 0.5) / M;
        const double y[2] = {std::cos(th), std::sin(th)};
        s += (y[j] / (2.0 * M_PI)) * y[i];
    }
    s *= 2.0 * M_PI / M;

    SampledField lhs = fd_second(v, i, j);
    RepresentationReport rep;
    rep.sphere_term = s;
    const int margin = 4;
    double mx = 0.0;
    for (int jy = margin; jy < g.size(1) - margin; ++jy)
        for (int ix = margin; ix < g.size(0) - margin; ++ix)
            mx = std::max(mx, std::abs(lhs.values()[g.index(ix, jy)]));
    for (int jy = margin; jy < g.size(1) - margin; ++jy)
        for (int ix = margin; ix < g.size(0) - margin; ++ix) {
            const std::size_t k = g.index(ix, jy);
            const double rhs = conv.values()[k] + s * lap[k];
            if (mx == 0.0) {
                rep.max_rel_err = std::max(rep.max_rel_err, std::abs(rhs - lhs.values()[k]));
                ++rep.points;
                continue;
            }
            if (std::abs(lhs.values()[k]) < 0.25 * mx) continue;
            rep.max_rel_err = std::max(
                rep.max_rel_err, std::abs(lhs.values()[k] - rhs) / std::abs(lhs.values()[k]));
            ++rep.points;
        }
    return rep;
}

// ---- localized norms and seminorms ----------------------------------------------------

double local_morrey_norm(const SampledField& gf, double p, const MorreyWeightFn& phi,
                         const Weight& w, const Ball& B) {
    const Grid& g = gf.grid();
    if (!g.same_layout(w.grid()))
        throw std::invalid_argument("field and weight live on different grids");
    const double h = g.h();
    if (!(B.radius >= 4.0 * h)) throw std::runtime_error("ball under-resolved for local norm");

    const int nx = g.size(0), ny = (g.dim() == 2) ? g.size(1) : 1;
    std::vector<double> vals = gf.values(), mask(g.npoints(), 0.0);
    for (int jy = 0; jy < ny; ++jy)
        for (int ix = 0; ix < nx; ++ix) {
            const std::size_t k = g.index(ix, jy);
            const bool in = dist(g.point(ix, jy), B.center, g.dim()) < B.radius;
            const double m0 = gf.has_mask() ? gf.mask()[k] : 1.0;
            mask[k] = in ? m0 : 0.0;
            if (mask[k] == 0.0) vals[k] = 0.0;
        }
    SampledField masked(g, std::move(vals), std::move(mask));

    BallFamily F;
    const int stride = std::max(1, static_cast<int>(std::lround(B.radius / (4.0 * h))));
    for (int jy = 0; jy < ny; jy += stride)
        for (int ix = 0; ix < nx; ix += stride) {
            const Point x = g.point(ix, jy);
            if (dist(x, B.center, g.dim()) < B.radius) F.centers.push_back(x);
        }
    F.r_min = 4.0 * h;
    F.ratio = std::sqrt(2.0);
    F.count = 1 + static_cast<int>(std::floor(std::log(B.radius / (4.0 * h)) /
                                                  std::log(std::sqrt(2.0)) +
                                              1e-9));
    F.interior = false;
    return morrey_norm(masked, p, phi, w, F);
}

SeminormLedger seminorms(const SampledField& u, double p, const MorreyWeightFn& phi,
                         const Weight& w, const Point& center, double r) {
    const Grid& g = u.grid();
    const double h = g.h();
    for (int axis = 0; axis < g.dim(); ++axis) {
        const double lo = g.origin()[axis] - 0.5 * h;
        const double hi = lo + g.size(axis) * h;
        if (center[axis] - r < lo - 1e-12 || center[axis] + r > hi + 1e-12)
            throw std::runtime_error("ball leaves the domain");
    }
    SeminormLedger led;
    led.r = r;
    SampledField d1 = gradient_magnitude(u);
    SampledField d2 = hessian_magnitude(u, false);
    for (int t = 1; t <= 7; ++t) {
        const double theta = t / 8.0;
        if (theta * r < 4.0 * h) continue;
        led.theta_grid.push_back(theta);
        const double fac = theta * (1.0 - theta) * r;
        const Ball b{center, theta * r};
        led.theta[0] = std::max(led.theta[0], local_morrey_norm(u, p, phi, w, b));
        led.theta[1] = std::max(led.theta[1], fac * local_morrey_norm(d1, p, phi, w, b));
        led.theta[2] = std::max(led.theta[2], fac * fac * local_morrey_norm(d2, p, phi, w, b));
    }
    if (led.theta_grid.empty()) throw std::runtime_error("ball under-resolved for local norm");
    return led;
}

InteriorIneqReport interior_ineq_check(const EllipticProblem& P, const SampledField& u, double p,
                                       const MorreyWeightFn& phi, const Weight& w,
                                       const Point& center, double r) {
    SeminormLedger led = seminorms(u, p, phi, w, center, r);
    SampledField lu = apply_operator(P, u);
    const double lop = local_morrey_norm(lu, p, phi, w, Ball{center, r});
    InteriorIneqReport rep;
    rep.r = r;
    rep.theta2 = led.theta[2];
    rep.rhs = r * r * lop + led.theta[1] + led.theta[0];
    if (rep.rhs > 0.0)
        rep.ratio = rep.theta2 / rep.rhs;
    else
        rep.ratio = (rep.theta2 == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
    return rep;
}

double cutoff_value(const Point& x, const Point& center, double r, double theta) {
    if (!(r > 0.0) || !(theta > 0.0) || !(theta < 1.0))
        throw std::invalid_argument("cutoff needs r > 0 and theta in (0,1)");
    const double tp = theta * (3.0 - theta) / 2.0;
    const double a = theta * r, b = tp * r;
    const double rho = dist(x, center, 2);
    if (rho <= a) return 1.0;
    if (rho >= b) return 0.0;
    const double t = (rho - a) / (b - a);
    const double sstep = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    return 1.0 - sstep;
}

InterpReport interpolation_check(const std::vector<SampledField>& family, double p,
                                 const MorreyWeightFn& phi, const Weight& w, const Point& center,
                                 double r, const std::vector<double>& deltas) {
    InterpReport rep;
    rep.r = r;
    rep.family_size = static_cast<int>(family.size());
    const Ball B{center, r};
    for (const SampledField& u : family) {
        const double n0 = local_morrey_norm(u, p, phi, w, B);
        if (!(n0 > 0.0)) continue;  // a vanishing field carries no constraint
        const double n1 = local_morrey_norm(gradient_magnitude(u), p, phi, w, B);
        const double n2 = local_morrey_norm(hessian_magnitude(u, false), p, phi, w, B);
        for (double d : deltas) {
            if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
            rep.C_emp = std::max(rep.C_emp, d * (n1 - d * n2) / n0);
        }
    }
    return rep;
}

CaccioppoliReport caccioppoli_check(const EllipticProblem& P,
                                    const std::vector<SampledField>& family, double p,
                                    const MorreyWeightFn& phi, const Weight& w,
                                    const Point& center, double r) {
    CaccioppoliReport rep;
    rep.r = r;
    rep.family_size = static_cast<int>(family.size());
    const Ball Bin{center, 0.5 * r}, Bout{center, r};
    for (const SampledField& u : family) {
        const double lhs = local_morrey_norm(hessian_magnitude(u, false), p, phi, w, Bin);
        const double den = local_morrey_norm(apply_operator(P, u), p, phi, w, Bout) +
                           local_morrey_norm(u, p, phi, w, Bout) / (r * r);
        if (!(den > 0.0)) continue;
        rep.C_emp = std::max(rep.C_emp, lhs / den);
    }
    return rep;
}

std::vector<SampledField> scaled_profiles(const Grid& g, const Point& center, double r) {
    if (g.dim() != 2) throw std::invalid_argument("profiles are 2D");
    const double s = 0.9 * r;
    auto window = [s, center](const Point& x) {
        const double q2 = (dist(x, center, 2) / s) * (dist(x, center, 2) / s);
        if (q2 >= 1.0) return 0.0;
        const double one = 1.0 - q2;
        return one * one * one;
    };
    std::vector<SampledField> out;
    out.push_back(SampledField::from_function(g, window));
    out.push_back(SampledField::from_function(g, [&](Point x) {
        return window(x) * std::cos(7.0 * (x[0] - center[0]) / r);
    }));
    out.push_back(SampledField::from_function(g, [&](Point x) {
        const double dx = x[0] - center[0], dy = x[1] - center[1];
        return window(x) * (dx * dx - dy * dy) / (r * r);
    }));
    return out;
}

// ---- a priori constant -----------------------------------------------------------------

AprioriReport apriori_constant(const ProblemRecipe& R, const std::function<double(const Point&)>& f,
                               double p, const MorreyWeightFn& phi, const WeightFactory& wf,
                               const std::vector<int>& meshes, bool exclude_boundary_layer) {
    if (meshes.empty()) throw std::invalid_argument("no mesh levels given");
    if (!wf) throw std::invalid_argument("missing weight factory");
    AprioriReport rep;
    rep.problem = R.name;
    rep.meshes = meshes;
    rep.boundary_layer_excluded = exclude_boundary_layer;

    auto fam_for = [](const Grid& g, int m) {
        return BallFamily::lattice(g, std::max(1, m / 16), 1.0 / 16.0, std::sqrt(2.0), 5);
    };

    const int mref = *std::max_element(meshes.begin(), meshes.end());
    Grid gref = interior_grid(mref);
    Weight wref = wf(gref);
    ApReport ap = ap_characteristic(wref, p, fam_for(gref, mref));
    if (ap.diverged || !std::isfinite(ap.characteristic)) {
        rep.note = "refused: weight fails the A_p gate" +
                   (ap.note.empty() ? std::string() : " (" + ap.note + ")");
        return rep;
    }
    ConditionReport pc = check_pair(phi, phi, p, wref, "weighted_log");
    if (pc.status != "PASS") {
        rep.note = "refused: profile growth condition " + pc.status +
                   (pc.note.empty() ? std::string() : ": " + pc.note);
        return rep;
    }
    rep.preconditions_ok = true;

    for (int m : meshes) {
        EllipticProblem P = assemble(R, f, m);
        SampledField u = solve_dirichlet(P);
        Weight wm = wf(P.grid);
        BallFamily F = fam_for(P.grid, m);
        SampledField d2 = hessian_magnitude(u, exclude_boundary_layer);
        const double num = morrey_norm(d2, p, phi, wm, F);
        const double den = morrey_norm(u, p, phi, wm, F) +
                           morrey_norm(SampledField(P.grid, P.f), p, phi, wm, F);
        rep.C_est.push_back(num / den);
    }
    if (rep.C_est.size() > 1) {
        const double mx = *std::max_element(rep.C_est.begin(), rep.C_est.end());
        const double mn = *std::min_element(rep.C_est.begin(), rep.C_est.end());
        rep.spread = mn > 0.0 ? mx / mn - 1.0 : std::numeric_limits<double>::infinity();
    }
    return rep;
}

}  // namespace morrey
