#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "morrey/field.hpp"
#include "morrey/geometry.hpp"
#include "morrey/morrey_space.hpp"
#include "morrey/weights.hpp"

namespace morrey {

// Singular convolution kernel K(x, xi), xi != 0, homogeneous of degree -dim in
// xi with zero mean over the unit sphere. `autonomous` kernels ignore x and
// take the fast tabulated path in cz_apply.
struct KernelSpec {
    std::function<double(const Point& x, const Point& xi)> evaluator;
    int dim = 1;
    bool autonomous = true;
    double sphere_mean_tol = 1e-8;
    double deriv_bound = 0.0;  // sup of |grad_xi K| on the unit sphere, if known
    std::string name;
};

KernelSpec hilbert_kernel();                   // 1D, K(xi) = 1/(pi xi)
KernelSpec riesz_even_kernel();                // 2D, (xi1^2 - xi2^2)/(2 pi |xi|^4)
KernelSpec log_hessian_kernel(int i, int j);   // 2D, D_ij of (2 pi)^{-1} ln|xi|

struct KernelCheck {
    double worst_homogeneity = 0.0;  // max relative defect of degree -dim scaling
    double sphere_mean = 0.0;
    double sphere_abs = 0.0;  // integral of |K| over the sphere (finiteness)
    bool ok = false;
};

// Samples scaling factors and sphere directions; quadrature over S^{n-1} is
// two-point in 1D and periodic-trapezoid (512 nodes) in 2D.
KernelCheck kernel_invariants(const KernelSpec& K, std::uint64_t seed = 1234);

// Hardy-Littlewood maximal function: at every grid point, the max over the
// family's radii of the ball mean of |f| with zero extension outside the
// support (denominator counts all in-grid cells of the ball, masked or not).
// Family centers are ignored; radii capturing no cells are skipped.
SampledField maximal(const SampledField& f, const BallFamily& F);

// Principal-value convolution: sum over cells y != cell(x) of
// K(x, x-y) f(y) h^n, where every symmetric offset pair is accumulated
// jointly (pair-sum realization of the principal value; the center cell
// contributes zero). Refuses kernels that fail the zero-sphere-mean check.
SampledField cz_apply(const KernelSpec& K, const SampledField& f);

// Same quadrature with a hard inner cutoff |x-y| >= eps and no pairing;
// values for eps in {h, 2h, 4h} must agree to quadrature order at points
// where f is smooth. Used for principal-value consistency checks.
SampledField cz_apply_cutoff(const KernelSpec& K, const SampledField& f, double eps);

// Commutator C[a,f](x) = P.V. sum of K(x, x-y) (a(x) - a(y)) f(y) h^n,
// accumulated directly (not via the a*Kf - K(af) identity, which serves as an
// independent consistency check in the tests).
SampledField commutator_apply(const SampledField& a, const KernelSpec& K, const SampledField& f);

// Half-space reflection built from a symmetric positive definite coefficient
// field: T(x; y) = x - 2 x_n a^n(y) / a^{nn}(y). coeff returns {a11, a12, a22}
// at y (1D uses a11 only). Eigenvalues must lie in [1/lambda, lambda].
struct ReflectionMap {
    int dim = 2;
    double lambda = 1.0;
    std::function<std::array<double, 3>(const Point&)> coeff;
};

ReflectionMap identity_reflection(int dim);

Point reflect_point(const ReflectionMap& R, const Point& x, const Point& y);  // T(x; y)
Point reflect(const ReflectionMap& R, const Point& x);                        // T(x) = T(x; x)
Point mirror(const Point& x, int dim);                                        // x-tilde

struct ReflectBounds {
    double c1 = 0.0;  // empirical min of |T(x) - y| / |x~ - y|
    double c2 = 0.0;  // empirical max
    int samples = 0;
};

// Random (x, y) pairs in the upper-half box [lo, hi]^{dim-1} x (0, hi];
// streams are prefix-stable, so doubling n_samples extends the same sample.
ReflectBounds reflect_bounds_check(const ReflectionMap& R, int n_samples, std::uint64_t seed,
                                   double lo = -1.0, double hi = 1.0);

// Nonsingular half-space operator: out(x) = sum over unmasked cells y of
// K(x, T(x) - y) f(y) h^n for x in the open upper half-space (plain
// quadrature; the kernel argument never vanishes there). Points with
// x_n <= 0 are masked in the output.
SampledField nonsingular_apply(const KernelSpec& K, const ReflectionMap& R,
                               const SampledField& f);

struct SublinearityReport {
    double C = 0.0;  // max over admissible x of |Tf(x)| / int |f(y)| |xr-y|^{-n} dy
    int points = 0;
};

// Pointwise sublinearity constant for x at distance >= margin from supp f.
// xref remaps the pole (pass the mirror map for half-space operators).
SublinearityReport sublinearity_check(const SampledField& Tf, const SampledField& f,
                                      double margin,
                                      const std::function<Point(const Point&)>& xref = {});

struct TestField {
    std::string label;
    SampledField field;
};

struct OpRatioReport {
    std::string id;
    std::string status;  // PASS / FAIL / INCONCLUSIVE
    double max_ratio = 0.0;
    double extended_ratio = 0.0;
    double growth = 0.0;
    int used = 0;
    int skipped = 0;
    std::vector<std::pair<std::string, double>> per_field;
    std::string note;
};

using FieldOp = std::function<SampledField(const SampledField&)>;

// Empirical operator norm between Morrey norms: sup over the base family of
// ||Tf||_{p,phi2,w} / ||f||_{p,phi1,w}, re-taken with the extension fields
// appended. Growth beyond 10% downgrades PASS to INCONCLUSIVE; zero
// denominators are skipped and counted.
OpRatioReport norm_ratio_estimate(const FieldOp& T, double p, const MorreyWeightFn& phi1,
                                  const MorreyWeightFn& phi2, const Weight& w,
                                  const BallFamily& F, const std::vector<TestField>& base,
                                  const std::vector<TestField>& extension,
                                  const std::string& id = "operator_norm_ratio");

}  // namespace morrey
