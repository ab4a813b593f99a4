#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "morrey/field.hpp"
#include "morrey/morrey_space.hpp"
#include "morrey/weights.hpp"

namespace morrey {

// ---- problem description ------------------------------------------------------
//
// Nondivergence operator on the unit square with zero boundary values:
//   L u = a11 uxx + 2 a12 uxy + a22 uyy + b1 ux + b2 uy + c u = f.
// All fields are sampled on the interior nodes (origin (h,h), spacing h).

struct EllipticProblem {
    Grid grid;
    std::vector<double> a11, a12, a22, b1, b2, c, f;
    double lambda = 1.0;  // two-sided ellipticity bound

    // throws when array sizes disagree with the grid or when a coefficient
    // matrix has an eigenvalue outside [1/lambda, lambda]
    void validate() const;
};

// Named coefficient sets. Evaluators receive the mesh width so rough families
// can be frozen at a grid-tied scale; smooth sets ignore it.
struct ProblemRecipe {
    std::string name;
    double lambda = 1.0;
    std::function<double(const Point&, double)> a11, a12, a22, b1, b2, c;
};

ProblemRecipe recipe_identity();         // a = I, b = 0, c = 0
ProblemRecipe recipe_diag();             // a = diag(2,1)
ProblemRecipe recipe_smooth_variable();  // wavy SPD a, drift, c <= 0
// a11 = 2 + sin(ln(-ln s)), s = |x - x0| clamped to [2h, 0.9]: oscillation
// slows near x0, so the mean-oscillation modulus vanishes at small scales
ProblemRecipe recipe_vmo_log(Point x0 = {0.5, 0.5});

// interior-node grid for the unit square at m cells per side (m >= 32)
Grid interior_grid(int m);

// sample the recipe and right-hand side on the m-cell interior grid
EllipticProblem assemble(const ProblemRecipe& R, const std::function<double(const Point&)>& f,
                         int m);

// ---- solver ---------------------------------------------------------------------

// 9-point centered stencil, sparse LU; throws if the factorization fails or the
// residual exceeds 1e-10 times the data scale.
SampledField solve_dirichlet(const EllipticProblem& P);

// the same stencil applied to an arbitrary field (zero extension off the grid)
SampledField apply_operator(const EllipticProblem& P, const SampledField& u);

// ---- finite differences ------------------------------------------------------------

// centered in the interior, second-order one-sided at the first/last index;
// axes are 0-based
SampledField fd_derivative(const SampledField& u, int axis);
SampledField fd_second(const SampledField& u, int i, int j);
SampledField gradient_magnitude(const SampledField& u);
// sqrt(uxx^2 + 2 uxy^2 + uyy^2); optionally masks the outermost grid layer,
// where only one-sided differences are available
SampledField hessian_magnitude(const SampledField& u, bool exclude_boundary_layer);

// ---- manufactured solutions ----------------------------------------------------------

struct SmoothFn {
    std::function<double(const Point&)> u, ux, uy, uxx, uxy, uyy;
};
SmoothFn sine_product();  // sin(pi x) sin(pi y)
SmoothFn poly_bubble();   // x(1-x) y(1-y)

struct MMSReport {
    std::vector<int> meshes;
    std::vector<double> max_err;
    std::vector<double> ratios;  // err[k] / err[k+1]
};

// For each mesh: build f by applying the recipe coefficients to the analytic
// derivatives of `exact`, solve, and record the max-norm error against exact.u.
MMSReport mms_convergence(const ProblemRecipe& R, const SmoothFn& exact,
                          const std::vector<int>& meshes);

// ---- second-derivative representation -------------------------------------------------

struct RepresentationReport {
    double sphere_term = 0.0;  // unit-circle correction, computed by quadrature
    double max_rel_err = 0.0;  // over accepted sample points
    int points = 0;
};

// For constant identity coefficients, the Hessian component D_ij v equals the
// singular convolution of the Laplacian of v with the log-potential Hessian
// kernel plus a sphere correction. Both sides are evaluated numerically (i, j
// are 0-based); points near the grid edge or with tiny |D_ij v| are skipped.
RepresentationReport representation_check(const SampledField& v, int i, int j);

// ---- localized norms and seminorms ------------------------------------------------------

// Morrey norm of g restricted to the ball B: the field is masked to B and the
// sup runs over sub-balls centered in B with radii from 4h up to B.radius.
double local_morrey_norm(const SampledField& g, double p, const MorreyWeightFn& phi,
                         const Weight& w, const Ball& B);

struct SeminormLedger {
    double r = 0.0;
    std::array<double, 3> theta{};  // s = 0, 1, 2
    std::vector<double> theta_grid;
};

// Theta_s = max over the theta grid {1/8..7/8} of
//   [theta(1-theta) r]^s * local norm of |D^s u| on B(center, theta r).
SeminormLedger seminorms(const SampledField& u, double p, const MorreyWeightFn& phi,
                         const Weight& w, const Point& center, double r);

struct InteriorIneqReport {
    double r = 0.0;
    double theta2 = 0.0;
    double rhs = 0.0;  // r^2 ||Lu||_{B_r} + Theta_1 + Theta_0
    double ratio = 0.0;
};
InteriorIneqReport interior_ineq_check(const EllipticProblem& P, const SampledField& u, double p,
                                       const MorreyWeightFn& phi, const Weight& w,
                                       const Point& center, double r);

// radial bump: 1 on B_{theta r}, 0 outside B_{theta' r} with
// theta' = theta(3-theta)/2, C2-smooth polynomial transition in between
double cutoff_value(const Point& x, const Point& center, double r, double theta);

struct InterpReport {
    double r = 0.0;
    double C_emp = 0.0;  // minimal constant passing the whole family
    int family_size = 0;
};

// Fit the smallest C with ||Du|| <= delta ||D^2 u|| + (C/delta) ||u|| on
// B(center, r) over every field in the family and every delta in the grid.
InterpReport interpolation_check(const std::vector<SampledField>& family, double p,
                                 const MorreyWeightFn& phi, const Weight& w, const Point& center,
                                 double r, const std::vector<double>& deltas);

struct CaccioppoliReport {
    double r = 0.0;
    double C_emp = 0.0;
    int family_size = 0;
};

// Largest over the family of
//   ||D^2 u||_{B_{r/2}} / ( ||Lu||_{B_r} + r^{-2} ||u||_{B_r} ).
CaccioppoliReport caccioppoli_check(const EllipticProblem& P,
                                    const std::vector<SampledField>& family, double p,
                                    const MorreyWeightFn& phi, const Weight& w,
                                    const Point& center, double r);

// three analytic probe fields supported in B(center, 0.9 r): a plain bump, an
// oscillating bump, and an anisotropic quadratic bump, all shaped at scale r
std::vector<SampledField> scaled_profiles(const Grid& g, const Point& center, double r);

// ---- a priori constant -----------------------------------------------------------------

struct AprioriReport {
    std::string problem;
    bool preconditions_ok = false;
    std::string note;
    std::vector<int> meshes;
    std::vector<double> C_est;  // ||D^2 u|| / (||u|| + ||f||) per mesh
    double spread = 0.0;        // max/min - 1 over meshes
    bool boundary_layer_excluded = true;
};

// samples the same physical weight on each mesh level
using WeightFactory = std::function<Weight(const Grid&)>;

// Refuses (preconditions_ok = false, note filled) unless the profile passes
// the weighted-log growth condition and the weight passes the A_p gate; then
// solves at each mesh level and reports the estimate constants.
AprioriReport apriori_constant(const ProblemRecipe& R, const std::function<double(const Point&)>& f,
                               double p, const MorreyWeightFn& phi, const WeightFactory& wf,
                               const std::vector<int>& meshes,
                               bool exclude_boundary_layer = true);

}  // namespace morrey
