#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "morrey/field.hpp"
#include "morrey/geometry.hpp"
#include "morrey/weights.hpp"

namespace morrey {

// phi(x, r): the radius profile a Morrey norm is measured against. Power and
// classic descriptors are analytic; tables carry samples on a (center,
// log-radius) grid with log-linear interpolation in r (clamped at the ends,
// so values stay positive) and nearest-center lookup in x.
class MorreyWeightFn {
public:
    static MorreyWeightFn power(double beta);  // r^{-beta}
    // r^{(lambda-n)/p} with 0 < lambda < n
    static MorreyWeightFn classic(double lambda, double n, double p);
    static MorreyWeightFn table(std::vector<Point> centers, std::vector<double> radii,
                                std::vector<std::vector<double>> values);

    double operator()(const Point& x, double r) const;
    const std::string& describe() const { return desc_; }

private:
    MorreyWeightFn() = default;
    double exponent_ = 0.0;  // analytic: r^{exponent_}
    bool tabulated_ = false;
    std::vector<Point> centers_;
    std::vector<double> log_r_;
    std::vector<std::vector<double>> log_v_;  // per center, log phi
    std::string desc_;
};

struct MorreyNorm {
    double value = 0.0;
    Ball argmax;
    int used = 0;
    int skipped = 0;
    std::vector<BallValue> per_ball;
};

// sup over the family of phi(x,r)^{-1} (w(B)^{-1} int_B |f|^p w)^{1/p}.
// Masked f restricts both integral and w-measure to B intersect the support
// (the domain-localized convention). Under-resolved balls are skipped.
MorreyNorm morrey_norm_detail(const SampledField& f, double p, const MorreyWeightFn& phi,
                              const Weight& w, const BallFamily& F);
double morrey_norm(const SampledField& f, double p, const MorreyWeightFn& phi, const Weight& w,
                   const BallFamily& F);

using PositiveFn1D = std::function<double(double)>;

// Tail integral int_r^inf g(t) psi(t) dt by octave-wise adaptive quadrature.
// Throws "non-integrable tail" when octave contributions fail to decay within
// the truncation budget.
double weighted_hardy(const PositiveFn1D& g, const PositiveFn1D& psi, double r,
                      double rel_tol = 1e-7);

struct HardyOpts {
    double r_lo = 1.0 / 256.0;  // outer sup sampled on [r_lo, r_hi]
    double r_hi = 256.0;
    double rho = 0.0;        // log-grid ratio; 0 = default 2^{1/8}
    double t_factor = 4096;  // integral truncated at t_factor * r_hi, then doubled
};

struct HardyBest {
    double B = 0.0;
    double argmax_r = 0.0;
    bool diverged = false;
    std::string note;
};

// B = sup_r v2(r) int_r^inf psi(t) / (sup_{s>t} v1(s)) dt, inner sup and
// integral sharing one geometric grid. Divergence (under truncation doubling)
// returns the +inf sentinel with a note.
HardyBest hardy_best_constant(const PositiveFn1D& v1, const PositiveFn1D& v2,
                              const PositiveFn1D& psi, HardyOpts opts = {});

struct HardyTriple {
    PositiveFn1D v1, v2, psi;
    // positivity of the weights and monotonicity of candidate g are checked
    // on the shared grid before use
    void validate(double lo, double hi) const;
};

struct SharpnessResult {
    double B = 0.0;
    double best_ratio = 0.0;   // best empirical (sup v2 H g)/(sup v1 g)
    double worst_slack = 0.0;  // max ratio/B over all candidates
    int samples = 0;
};

// Random nondecreasing step functions (plus a noisy copy of the extremal
// 1/sup_{s>t}v1) probing how sharp B is: ratios must stay below B and the
// best should come close.
SharpnessResult hardy_sharpness_search(const HardyTriple& t, int n_samples, std::uint64_t seed,
                                       HardyOpts opts = {});

struct PairOpts {
    std::vector<Point> centers;    // empty = grid midpoint
    std::vector<double> r_values;  // empty = geometric sweep inside the grid
    double rho = 0.0;              // s/t grid ratio; 0 = default 2^{1/8}
    double t_factor = 4096.0;      // T_max = t_factor * r
};

struct ConditionReport {
    std::string mode;
    std::string status;  // PASS / FAIL / INCONCLUSIVE
    double empirical_C = 0.0;
    Point worst_x{0.0, 0.0};
    double worst_r = 0.0;
    double t_max = 0.0;
    double consistency = 0.0;  // relative change of the integral on the last doubling
    double tail_estimate = 0.0;
    std::string note;
};

// Integral growth conditions tying phi1 to phi2. Modes:
//   zs           int_r^inf phi1(x,t) dt/t                          <= C phi2(x,r)
//   sup          int_r^inf [sup_{s>t} phi1(x,s) s^{n/p}] t^{-n/p} dt/t
//   weighted     int_r^inf [sup_{s>t} phi1(x,s) w(B_s)^{1/p}] w(B_t)^{-1/p} dt/t
//   weighted_log weighted with an extra (1 + ln(t/r)) factor
// The inner sup runs over the geometric grid up to a horizon past T_max; a
// sup still growing at the horizon or non-decaying octave increments of the
// integral mean FAIL, truncation-sensitive but decaying tails INCONCLUSIVE.
ConditionReport check_pair(const MorreyWeightFn& phi1, const MorreyWeightFn& phi2, double p,
                           const Weight& w, const std::string& mode, PairOpts opts = {});

}  // namespace morrey
