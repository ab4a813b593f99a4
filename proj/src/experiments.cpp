// Experiment registry: one self-contained, config-driven measurement per CLI
// subcommand. Each experiment reuses the library modules, gates its measured
// values, and emits a Report whose assertions carry self-describing ids.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "morrey/elliptic.hpp"
#include "morrey/morrey_space.hpp"
#include "morrey/operators.hpp"
#include "morrey/oscillation.hpp"
#include "morrey/report.hpp"
#include "morrey/testfields.hpp"
#include "morrey/weights.hpp"

namespace morrey {

struct ExperimentEntry {
    ExperimentInfo info;
    Report (*fn)(const ExperimentConfig&);
};

namespace {

// ---- shared helpers ------------------------------------------------------------

Grid offset_line(double lo, double hi, int n) {
    double h = (hi - lo) / n;
    return Grid::line(lo + 0.5 * h, h, n);
}

Grid offset_square(double lo, double hi, int n) {
    double h = (hi - lo) / n;
    return Grid::square({lo + 0.5 * h, lo + 0.5 * h}, h, n, n);
}

BallFamily centers_family(std::vector<Point> centers, double r_min, int count,
                          double ratio = std::sqrt(2.0)) {
    BallFamily fam;
    fam.centers = std::move(centers);
    fam.r_min = r_min;
    fam.ratio = ratio;
    fam.count = count;
    fam.center_stride = 0;
    return fam;
}

// ln|x| sampled as exact cell averages via the antiderivative t ln|t| - t.
SampledField exact_ln_field(const Grid& g) {
    auto F = [](double t) { return t == 0.0 ? 0.0 : t * std::log(std::abs(t)) - t; };
    std::vector<double> v(g.npoints());
    for (int i = 0; i < g.size(0); ++i) {
        double a = g.coord(0, i) - 0.5 * g.h();
        double b = a + g.h();
        v[std::size_t(i)] = (F(b) - F(a)) / g.h();
    }
    return SampledField(g, v);
}

SampledField sign_field(const Grid& g) {
    return SampledField::from_function(g, [](Point p) { return p[0] < 0.0 ? -1.0 : 1.0; });
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

Assertion pass_if(bool ok, const std::string& id, double measured, const std::string& detail) {
    return {id, ok ? "PASS" : "FAIL", measured, detail};
}

// PASS iff measured <= limit.
Assertion gate_le(const std::string& id, double measured, double limit,
                  const std::string& what) {
    return pass_if(std::isfinite(measured) && measured <= limit, id, measured,
                   what + " (gate: <= " + num(limit) + ")");
}

// PASS iff |measured - expected| <= rel * |expected|.
Assertion gate_rel(const std::string& id, double measured, double expected, double rel,
                   const std::string& what) {
    bool ok = std::isfinite(measured) && std::abs(measured - expected) <= rel * std::abs(expected);
    return {id, ok ? "PASS" : "FAIL", measured,
            what + " (expected " + num(expected) + " within " + num(rel * 100.0) + "%)"};
}

Assertion info(const std::string& id, double measured, const std::string& detail) {
    return {id, "INFO", measured, detail};
}

double spread_of(const std::vector<double>& v) {
    double mx = *std::max_element(v.begin(), v.end());
    double mn = *std::min_element(v.begin(), v.end());
    return mn > 0.0 ? mx / mn - 1.0 : std::numeric_limits<double>::infinity();
}

// L2 norm of f over the centered ball of radius r (unmasked cells only).
double l2_on_ball(const SampledField& f, const Point& c, double r) {
    const Grid& g = f.grid();
    double s = 0.0;
    for (int j = 0; j < (g.dim() == 2 ? g.size(1) : 1); ++j)
        for (int i = 0; i < g.size(0); ++i) {
            std::size_t k = g.dim() == 2 ? g.index(i, j) : std::size_t(i);
            Point x = g.dim() == 2 ? g.point(i, j) : Point{g.coord(0, i), 0.0};
            if (dist(x, c, g.dim()) > r) continue;
            if (f.has_mask() && f.mask()[k] == 0.0) continue;
            double v = f.values()[k];
            s += v * v;
        }
    double cell = g.h();
    if (g.dim() == 2) cell *= g.h();
    return std::sqrt(s * cell);
}

// ---- weights -------------------------------------------------------------------

Report exp_ap_constant(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 4096));
    const double p = cfg.param("p", 2.0);
    const double alpha = cfg.param("alpha", 0.5);
    Grid g = offset_line(-2.0, 2.0, m);  // h = 2^-10 at the default m

    auto wu = Weight::uniform(g);
    auto fam = BallFamily::lattice(g, std::max(1, m / 32), 4.0 * g.h(), std::sqrt(2.0), 8);
    ApReport ru = ap_characteristic(wu, p, fam);
    rep.constant("uniform_characteristic", ru.characteristic);
    rep.add(gate_le("uniform_characteristic_deviation", std::abs(ru.characteristic - 1.0), 1e-8,
                    "Lebesgue weight characteristic must equal 1"));

    auto wp = Weight::power(g, alpha, {0.0, 0.0});
    int count = int(std::floor(std::log(0.5 / (4.0 * g.h())) / std::log(std::sqrt(2.0)))) + 1;
    BallFamily centered = centers_family({{0.0, 0.0}}, 4.0 * g.h(), count);
    ApReport rp = ap_characteristic(wp, p, centered);
    rep.constant("power_characteristic", rp.characteristic);
    rep.add(pass_if(!rp.diverged, "power_weight_inside_the_class",
                    rp.diverged ? 1.0 : 0.0, "characteristic finite on every ball"));
    if (p == 2.0 && std::abs(alpha) < 1.0) {
        double closed = 1.0 / ((1.0 + alpha) * (1.0 - alpha));
        rep.add(gate_rel("power_characteristic_vs_closed_form", rp.characteristic, closed, 0.02,
                         "centered-interval characteristic of |x|^" + num(alpha)));
    } else {
        rep.add(info("power_characteristic_no_closed_form", rp.characteristic,
                     "closed form available only at p=2 with |alpha| < 1"));
    }
    return rep;
}

Report exp_ap_properties(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 2048));
    const double p = cfg.param("p", 2.0);
    Grid g = offset_line(-2.0, 2.0, m);
    auto fam = BallFamily::lattice(g, std::max(1, m / 16), 4.0 * g.h(), std::sqrt(2.0), 8);
    const std::vector<double> alphas = {-0.5, -0.25, 0.25, 0.5, 0.75};
    for (double a : alphas) {
        auto w = Weight::power(g, a, {0.0, 0.0});
        PropertyReport pr = ap_property_suite(w, p, fam);
        std::string tag = "alpha_" + num(a);
        bool saw_duality = false;
        for (const auto& item : pr.items) {
            if (item.id == "ap_duality_gap") {
                saw_duality = true;
                rep.constant("duality_gap_" + tag, item.measured);
                rep.add({"duality_gap_within_2pct_" + tag, item.status, item.measured,
                         item.detail});
            }
        }
        rep.add(pass_if(saw_duality && pr.all_ok(), "property_suite_clean_" + tag,
                        saw_duality ? 0.0 : 1.0,
                        "no FAIL item in the structural suite for |x|^" + num(a)));
    }
    return rep;
}

// ---- oscillation ----------------------------------------------------------------

Report exp_bmo(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 4096));
    Grid g = offset_line(-2.0, 2.0, m);

    auto sgn = sign_field(g);
    auto fam_sgn = centers_family({{0.0, 0.0}, {0.1, 0.0}, {-0.35, 0.0}}, 4.0 * g.h(), 12);
    BmoResult bs = bmo_norm({sgn, fam_sgn});
    rep.constant("sgn_bmo_norm", bs.norm);
    rep.add(gate_rel("sgn_bmo_norm_is_one", bs.norm, 1.0, 0.02,
                     "mean oscillation of the sign function"));

    auto lin = SampledField::from_function(g, [](Point p) { return p[0]; });
    // r_max = 4h * sqrt(2)^14 = 0.5 at the default m, covering the R sweep
    auto fam_lin = BallFamily::lattice(g, std::max(1, m / 64), 4.0 * g.h(), std::sqrt(2.0), 15);
    OscillationFn al{lin, fam_lin};
    for (auto [R, v] : vmo_modulus(al, {0.05, 0.1, 0.2, 0.4})) {
        double r_used = 0.0;
        for (double r : fam_lin.radii())
            if (r <= R * (1.0 + 1e-12)) r_used = r;
        rep.constant("linear_modulus_R_" + num(R), v);
        rep.add(gate_rel("linear_modulus_is_half_radius_R_" + num(R), v, r_used / 2.0, 0.02,
                         "oscillation of a(x)=x over radius-" + num(r_used) + " balls"));
    }

    auto ln = exact_ln_field(g);
    auto fam_ln = centers_family({{0.0, 0.0}}, 4.0 * g.h(), 16);
    OscillationFn aln{ln, fam_ln};
    double bmo = bmo_norm(aln).norm;
    rep.constant("log_bmo_norm", bmo);
    const double r = cfg.param("drift_r", 0.125);
    const double t = cfg.param("drift_t", 0.5);
    double raw = mean_drift_check(aln, r, t) * bmo * std::log(t / r);
    rep.constant("log_centered_mean_drift", raw);
    rep.add(gate_le("log_drift_matches_ln_ratio", std::abs(raw - std::log(t / r)), 1e-3,
                    "centered means of ln|x| drift by exactly ln(t/r)"));
    return rep;
}

Report exp_vmo(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 8192));
    Grid g = offset_line(-2.0, 2.0, m);
    const double h = g.h();
    auto a = SampledField::from_function(g, [h](Point p) {
        double s = std::clamp(std::abs(p[0]), std::max(2.0 * h, 1e-9), 0.9);
        return 2.0 + std::sin(std::log(-std::log(s)));
    });
    BallFamily fam = BallFamily::lattice(g, std::max(1, m / 64), 1.0 / 32.0, 2.0, 4);
    OscillationFn osc{a, fam};
    auto gam = vmo_modulus(osc, {1.0 / 32.0, 1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0});
    bool mono = true;
    for (std::size_t k = 0; k + 1 < gam.size(); ++k)
        mono = mono && gam[k].second <= gam[k + 1].second + 1e-15;
    for (auto [R, v] : gam) rep.constant("modulus_R_" + num(R), v);
    rep.add(pass_if(mono, "modulus_nondecreasing", gam.back().second,
                    "oscillation modulus is monotone in the radius"));
    rep.add(gate_le("modulus_vanishes_toward_zero", gam.front().second / gam.back().second, 0.5,
                    "gamma at the smallest radius relative to the largest"));
    return rep;
}

Report exp_jn(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 2048));
    const double p = cfg.param("p", 2.0);
    Grid g = offset_line(-1.0, 1.0, m);
    auto fam = BallFamily::lattice(g, std::max(1, m / 32), 4.0 * g.h(), std::sqrt(2.0), 12);
    auto wu = Weight::uniform(g);
    auto wp = Weight::power(g, 0.5, {0.0, 0.0});

    std::vector<std::pair<std::string, SampledField>> functions;
    functions.emplace_back("sgn", sign_field(g));
    functions.emplace_back("ln", exact_ln_field(g));
    for (const auto& [fname, field] : functions) {
        OscillationFn a{field, fam};
        RatioReport jr = jn_check(a, p, fam);
        rep.constant("jn_ratio_" + fname, jr.max_ratio);
        rep.add(pass_if(jr.status == "PASS" && jr.growth <= 0.10,
                        "jn_ratio_stable_under_extension_" + fname, jr.growth,
                        "relative drift of the p-oscillation/bmo sup after one octave; " +
                            jr.note));
        for (const auto& [wname, w] : {std::pair<std::string, const Weight*>{"uniform", &wu},
                                       {"sqrt_weight", &wp}}) {
            auto reps = weighted_bmo_check(a, *w, p, fam);
            for (const auto& r : reps) {
                rep.constant(r.id + "_" + fname + "_" + wname, r.max_ratio);
                rep.add(pass_if(r.status == "PASS" && r.growth <= 0.10,
                                r.id + "_stable_" + fname + "_" + wname, r.growth,
                                "weighted oscillation ratio drift under one-octave extension; " +
                                    r.note));
            }
        }
    }
    return rep;
}

// ---- Morrey machinery ------------------------------------------------------------

Report exp_morrey_norm(const ExperimentConfig& cfg) {
    Report rep;
    const double p = cfg.param("p", 2.0);
    const double beta = cfg.param("beta", 1.5);
    const int dim = int(cfg.param("dim", 1));
    const int m = int(cfg.param("m", dim == 2 ? 128 : 1024));
    Grid g = dim == 2 ? offset_square(-1.0, 1.0, m) : offset_line(-2.0, 2.0, m);

    const std::string kind = cfg.option("field", "gaussian");
    SampledField f = SampledField::zeros(g);
    if (kind == "gaussian") {
        f = SampledField::from_function(g, [dim](Point x) {
            double q = dim == 2 ? x[0] * x[0] + x[1] * x[1] : x[0] * x[0];
            return std::exp(-4.0 * q);
        });
    } else if (kind == "indicator") {
        f = SampledField::from_function(g, [dim](Point x) {
            double q = dim == 2 ? std::hypot(x[0], x[1]) : std::abs(x[0]);
            return q <= 0.5 ? 1.0 : 0.0;
        });
    } else if (kind == "bump") {
        f = SampledField::from_function(g, [dim](Point x) {
            double q = dim == 2 ? std::hypot(x[0], x[1]) : std::abs(x[0]);
            double t = std::max(0.0, 1.0 - q * q);
            return t * t * t;
        });
    } else {
        throw std::invalid_argument("unknown field option: " + kind);
    }

    const std::string wkind = cfg.option("weight", "uniform");
    Weight w = wkind == "power" ? Weight::power(g, cfg.param("alpha", 0.5), {0.0, 0.0})
                                : Weight::uniform(g);
    if (wkind != "power" && wkind != "uniform")
        throw std::invalid_argument("unknown weight option: " + wkind);

    auto phi = MorreyWeightFn::power(beta);
    auto fam = BallFamily::lattice(g, std::max(1, m / 16), 4.0 * g.h(), std::sqrt(2.0), 8);
    MorreyNorm n1 = morrey_norm_detail(f, p, phi, w, fam);
    rep.constant("norm", n1.value);
    rep.constant("argmax_radius", n1.argmax.radius);
    rep.constant("balls_used", double(n1.used));
    rep.constant("balls_skipped", double(n1.skipped));
    rep.add(info("norm_value", n1.value,
                 "sup ball: center " + num(n1.argmax.center[0]) + "," +
                     num(n1.argmax.center[1]) + " radius " + num(n1.argmax.radius)));
    rep.add(pass_if(n1.used > 0 && std::isfinite(n1.value), "norm_finite_with_usable_balls",
                    double(n1.used), "at least one resolved ball contributes"));

    SampledField f2 = f.map([](double v) { return 2.0 * v; });
    double n2 = morrey_norm(f2, p, phi, w, fam);
    rep.add(gate_le("norm_homogeneous_in_the_field", std::abs(n2 - 2.0 * n1.value),
                    1e-12 * n1.value,
                    "doubling the field doubles the norm to machine precision"));
    return rep;
}

Report exp_check_pair(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 64));
    const double p = cfg.param("p", 2.0);
    const double beta = cfg.param("beta", 1.5);
    const double beta_low = cfg.param("beta_low", 0.5);
    Grid g = offset_square(-1.0, 1.0, m);
    auto w = Weight::uniform(g);
    auto phi = MorreyWeightFn::power(beta);
    PairOpts opts;
    opts.centers = {{0.0, 0.0}};
    opts.r_values = {0.05, 0.1, 0.2};

    ConditionReport cw = check_pair(phi, phi, p, w, "weighted", opts);
    rep.constant("weighted_C", cw.empirical_C);
    rep.constant("weighted_consistency", cw.consistency);
    rep.add(pass_if(cw.status == "PASS", "weighted_condition_passes", cw.empirical_C, cw.note));
    rep.add(gate_rel("weighted_C_vs_closed_form", cw.empirical_C, 1.0 / beta, 0.05,
                     "integral of t^{-beta-1} from r against r^{-beta}"));
    rep.add(gate_le("weighted_truncation_consistency", cw.consistency, 0.10,
                    "relative change of the integral on the last truncation doubling"));

    ConditionReport cl = check_pair(phi, phi, p, w, "weighted_log", opts);
    rep.constant("weighted_log_C", cl.empirical_C);
    rep.constant("weighted_log_consistency", cl.consistency);
    rep.add(pass_if(cl.status == "PASS", "weighted_log_condition_passes", cl.empirical_C,
                    cl.note));
    rep.add(gate_rel("weighted_log_C_vs_closed_form", cl.empirical_C,
                     1.0 / beta + 1.0 / (beta * beta), 0.05,
                     "the log factor adds 1/beta^2 to the closed form"));
    rep.add(gate_le("weighted_log_truncation_consistency", cl.consistency, 0.10,
                    "relative change of the integral on the last truncation doubling"));

    auto weak = MorreyWeightFn::power(beta_low);
    ConditionReport bad = check_pair(weak, weak, p, w, "weighted", opts);
    rep.add(pass_if(bad.status == "FAIL", "sub_threshold_profile_rejected", beta_low,
                    "decay slower than n/p must FAIL: " + bad.note));
    return rep;
}

Report exp_hardy(const ExperimentConfig& cfg) {
    Report rep;
    const int samples = int(cfg.param("samples", 24));
    const std::uint64_t seed = cfg.seed.value();
    struct Named {
        std::string tag;
        HardyTriple triple;
        double closed_B;
    };
    std::vector<Named> triples;
    triples.push_back({"inv_linear",
                       {[](double s) { return 1.0 / s; }, [](double r) { return r; },
                        [](double t) { return std::pow(t, -3.0); }},
                       1.0});
    triples.push_back({"sqrt_pair",
                       {[](double s) { return std::pow(s, -0.5); },
                        [](double r) { return std::sqrt(r); },
                        [](double t) { return std::pow(t, -2.0); }},
                       2.0});
    triples.push_back({"flat_linear",
                       {[](double) { return 1.0; }, [](double r) { return r; },
                        [](double t) { return std::pow(t, -2.0); }},
                       1.0});
    for (const auto& [tag, triple, closed_B] : triples) {
        HardyBest best = hardy_best_constant(triple.v1, triple.v2, triple.psi);
        rep.constant("B_" + tag, best.B);
        rep.add(gate_rel("best_constant_matches_closed_form_" + tag, best.B, closed_B, 0.01,
                         "geometric-grid evaluation of the two-weight best constant"));
        SharpnessResult res = hardy_sharpness_search(triple, samples, seed);
        rep.constant("search_best_ratio_" + tag, res.best_ratio);
        rep.add(pass_if(res.best_ratio >= 0.85 * res.B, "search_reaches_85pct_of_B_" + tag,
                        res.best_ratio / res.B,
                        "best random nondecreasing candidate relative to B"));
        rep.add(gate_le("no_candidate_exceeds_B_" + tag, res.worst_slack, 1.05,
                        "max candidate ratio over B"));
    }
    return rep;
}

// ---- operators ---------------------------------------------------------------

Report exp_maximal(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 4096));
    Grid g = offset_line(-4.0, 4.0, m);
    auto f = SampledField::from_function(
        g, [](Point p) { return (p[0] >= 0.0 && p[0] <= 1.0) ? 1.0 : 0.0; });
    BallFamily fam = centers_family({{0.0, 0.0}}, 4.0 * g.h(), 37, std::pow(2.0, 0.25));
    SampledField M = maximal(f, fam);
    auto at = [&](double x) {
        int i = int(std::lround((x - g.origin()[0]) / g.h()));
        return M.values()[std::size_t(std::clamp(i, 0, g.size(0) - 1))];
    };
    double far = at(2.0 - 0.5 * g.h());
    rep.constant("value_at_distance_two", far);
    rep.add(gate_rel("indicator_maximal_at_distance_two", far, 0.25, 0.03,
                     "best interval from x=2 covering [0,1] has mean 1/4"));
    double inside = at(0.5 - 0.5 * g.h());
    rep.constant("value_inside_support", inside);
    rep.add(pass_if(inside == 1.0, "indicator_maximal_inside_support", inside,
                    "small balls inside the support average to exactly 1"));
    bool dominated = true;
    double worst = 0.0;
    for (double x : {-1.0, 0.25, 0.75, 1.5, 3.0}) {
        for (double r : {0.1, 0.5, 1.0}) {
            Ball b{{x, 0.0}, r};
            double meanv = mean_ball(f, b);
            int i = int(std::lround((x - g.origin()[0]) / g.h()));
            double mv = M.values()[std::size_t(std::clamp(i, 0, g.size(0) - 1))];
            worst = std::max(worst, meanv - mv);
            dominated = dominated && mv >= meanv - 1e-12;
        }
    }
    rep.add(pass_if(dominated, "maximal_dominates_ball_means", worst,
                    "M f(x) >= mean of |f| over every sampled ball at x"));
    return rep;
}

Report exp_cz(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 8192));
    Grid g = offset_line(-4.0, 4.0, m);  // h = 2^-10 at the default m

    for (const auto& [kname, K] :
         {std::pair<std::string, KernelSpec>{"hilbert", hilbert_kernel()},
          {"riesz_even", riesz_even_kernel()},
          {"log_hessian_11", log_hessian_kernel(1, 1)}}) {
        KernelCheck chk = kernel_invariants(K);
        rep.add(pass_if(chk.ok, "kernel_invariants_" + kname, chk.sphere_mean,
                        "degree -n homogeneity and zero spherical mean"));
    }

    auto f = SampledField::from_function(
        g, [](Point p) { return (p[0] > -1.0 && p[0] < 1.0) ? 1.0 : 0.0; });
    SampledField Hf = cz_apply(hilbert_kernel(), f);
    const double guard = 5.0 * g.h();
    double worst = 0.0;
    for (int i = 0; i < g.size(0); ++i) {
        double x = g.coord(0, i);
        if (std::min(std::abs(x - 1.0), std::abs(x + 1.0)) < guard) continue;
        double exact = (1.0 / M_PI) * std::log(std::abs((x + 1.0) / (x - 1.0)));
        worst = std::max(worst, std::abs(Hf.values()[std::size_t(i)] - exact) / std::abs(exact));
    }
    rep.constant("hilbert_worst_rel_error", worst);
    rep.add(gate_le("hilbert_matches_closed_form", worst, 0.02,
                    "indicator transform vs (1/pi) ln|(x+1)/(x-1)| at >= 5h from the jumps"));

    // translation covariance: shifting the input by whole cells shifts the output
    auto bump = SampledField::from_function(g, [](Point p) {
        double t = std::max(0.0, 1.0 - (p[0] + 1.0) * (p[0] + 1.0) / 0.25);
        return t * t;
    });
    SampledField a = cz_apply(hilbert_kernel(), bump);
    int shift = int(cfg.param("shift_cells", 32));
    std::vector<double> shifted(g.npoints(), 0.0);
    for (int i = 0; i + shift < g.size(0); ++i)
        shifted[std::size_t(i + shift)] = bump.values()[std::size_t(i)];
    SampledField b = cz_apply(hilbert_kernel(), SampledField(g, shifted));
    double scale = 0.0, dev = 0.0;
    for (int i = 0; i < g.size(0); ++i) scale = std::max(scale, std::abs(a.values()[std::size_t(i)]));
    for (int i = 0; i + shift < g.size(0); ++i)
        dev = std::max(dev, std::abs(b.values()[std::size_t(i + shift)] -
                                     a.values()[std::size_t(i)]));
    rep.constant("translation_deviation", dev / scale);
    rep.add(gate_le("translation_covariance", dev / scale, 1e-12,
                    "cell-aligned shifts commute with the convolution"));
    return rep;
}

Report exp_commutator(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 4096));
    Grid g = offset_line(-2.0, 2.0, m);
    const double h = g.h();

    // linear symbol: (a(x)-a(y)) K(x-y) = 1/pi, so C[a,f] = (1/pi) int f
    auto lin = SampledField::from_function(g, [](Point p) { return p[0]; });
    auto ind = SampledField::from_function(
        g, [](Point p) { return std::abs(p[0]) <= 1.0 ? 1.0 : 0.0; });
    SampledField Cl = commutator_apply(lin, hilbert_kernel(), ind);
    double worst = 0.0;
    for (double v : Cl.values()) worst = std::max(worst, std::abs(v - 2.0 / M_PI));
    rep.constant("linear_symbol_worst_deviation", worst * M_PI / 2.0);
    rep.add(gate_le("linear_symbol_gives_constant_commutator", worst * M_PI / 2.0, 0.01,
                    "C[x, H] on an indicator is (1/pi) int f everywhere"));

    // rough symbol with vanishing oscillation modulus: the local commutator
    // ratio must shrink as the window shrinks
    auto a = SampledField::from_function(g, [h](Point p) {
        double s = std::clamp(std::abs(p[0]), std::max(2.0 * h, 1e-9), 0.9);
        return 2.0 + std::sin(std::log(-std::log(s)));
    });
    std::vector<double> radii = {0.25, 0.125, 0.0625, 0.03125};
    std::vector<double> ratios;
    for (double r : radii) {
        auto f = SampledField::from_function(g, [r](Point p) {
            double q = std::abs(p[0]) / (0.9 * r);
            double t = std::max(0.0, 1.0 - q * q);
            return t * t * t;
        });
        SampledField C = commutator_apply(a, hilbert_kernel(), f);
        double ratio = l2_on_ball(C, {0.0, 0.0}, r) / l2_on_ball(f, {0.0, 0.0}, r);
        ratios.push_back(ratio);
        rep.constant("local_ratio_r_" + num(r), ratio);
    }
    for (std::size_t k = 0; k + 1 < ratios.size(); ++k) {
        rep.add(gate_le("local_ratio_nonincreasing_r_" + num(radii[k + 1]),
                        ratios[k + 1] / ratios[k], 1.05,
                        "commutator-to-field ratio after halving the window"));
    }
    rep.add(gate_le("local_ratio_vanishes_with_the_window", ratios.back() / ratios.front(), 0.5,
                    "overall decay across the radius sweep"));
    return rep;
}

Report exp_reflect(const ExperimentConfig& cfg) {
    Report rep;
    const std::uint64_t seed = cfg.seed.value();
    const int samples = int(cfg.param("samples", 10000));

    auto I = identity_reflection(2);
    double worst = 0.0;
    for (int i = 1; i <= 8; ++i)
        for (int j = 1; j <= 8; ++j) {
            Point x{-1.0 + 0.25 * i, 0.03 * j};
            Point t = reflect(I, x);
            Point mx = mirror(x, 2);
            worst = std::max(worst, dist(t, mx, 2));
        }
    rep.add(pass_if(worst == 0.0, "identity_coefficients_reflect_exactly", worst,
                    "T(x) equals the mirror point bit-for-bit"));

    ReflectionMap R;
    R.dim = 2;
    R.lambda = cfg.param("lambda", 4.0);
    const double lambda = R.lambda;
    R.coeff = [lambda](const Point& y) {
        double th = 0.7 * std::sin(1.3 * y[0] + 0.9 * y[1]);
        double l1 = 1.0 / lambda + (lambda - 1.0 / lambda) *
                                       (0.5 + 0.5 * std::sin(2.1 * y[0] - 0.7 * y[1] + 0.3));
        double l2 = 1.0 / lambda +
                    (lambda - 1.0 / lambda) * (0.5 + 0.5 * std::cos(1.1 * y[0] + 1.9 * y[1]));
        double c = std::cos(th), s = std::sin(th);
        return std::array<double, 3>{c * c * l1 + s * s * l2, c * s * (l1 - l2),
                                     s * s * l1 + c * c * l2};
    };
    ReflectBounds r1 = reflect_bounds_check(R, samples, seed);
    ReflectBounds r2 = reflect_bounds_check(R, 2 * samples, seed);
    rep.constant("ctc_lower", r1.c1);
    rep.constant("ctc_upper", r1.c2);
    rep.constant("ctc_lower_doubled", r2.c1);
    rep.constant("ctc_upper_doubled", r2.c2);
    rep.add(pass_if(r1.c1 > 0.0 && std::isfinite(r1.c2), "ctc_ratios_finite", r1.c2,
                    "|T(x)-y| / |x~-y| bounded above and below"));
    // the empirical band floor: the coefficient band [1/lambda, lambda] keeps the
    // reflected point a definite distance from the mirror image
    rep.add(pass_if(r2.c1 >= 0.1, "ctc_lower_bounded_away_from_zero", r2.c1,
                    "doubled-sample minimum distance ratio stays above the floor 0.1"));
    // prefix-stable streams: doubling can only widen the band, never shift it
    rep.add(pass_if(r2.c1 <= r1.c1 + 1e-15 && r2.c2 >= r1.c2 - 1e-15,
                    "band_widens_monotonically_under_doubling", r2.c1 - r1.c1,
                    "the doubled sample extends the same stream"));
    rep.add(info("lower_movement_under_doubling", r2.c1 / r1.c1,
                 "extreme-value statistic: converges slowly and varies by seed"));
    rep.add(info("upper_movement_under_doubling", r2.c2 / r1.c2,
                 "extreme-value statistic: converges slowly and varies by seed"));
    return rep;
}

Report exp_nonsingular(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 2048));
    Grid g = offset_line(0.0, 4.0, m);
    auto f = SampledField::from_function(
        g, [](Point p) { return (p[0] > 1.0 && p[0] < 2.0) ? 1.0 : 0.0; });
    auto I = identity_reflection(1);
    SampledField Tf = nonsingular_apply(hilbert_kernel(), I, f);
    double worst = 0.0;
    for (int i = 0; i < g.size(0); ++i) {
        double x = g.coord(0, i);
        double exact = -(1.0 / M_PI) * std::log((x + 2.0) / (x + 1.0));
        worst = std::max(worst, std::abs(Tf.values()[std::size_t(i)] - exact) /
                                    std::abs(exact));
    }
    rep.constant("worst_rel_error", worst);
    rep.add(gate_le("reflected_kernel_matches_closed_form", worst, 0.01,
                    "indicator image of the reflected Hilbert kernel on the half-line"));

    SublinearityReport sub = sublinearity_check(
        Tf, f, 0.0, [](const Point& x) { return mirror(x, 1); });
    rep.constant("sublinearity_constant", sub.C);
    rep.add(pass_if(sub.points > 0 && sub.C > 0.0 && sub.C <= 0.5,
                    "pointwise_sublinear_bound", sub.C,
                    "|Tf(x)| against the mirrored-pole majorant"));
    return rep;
}

Report exp_op_ratio(const ExperimentConfig& cfg) {
    Report rep;
    const std::uint64_t seed = cfg.seed.value();
    const int m = int(cfg.param("m", 2048));
    const double p = cfg.param("p", 2.0);
    const double beta = cfg.param("beta", 0.3);
    Grid g = offset_line(-4.0, 4.0, m);
    auto phi = MorreyWeightFn::power(beta);
    auto fam = BallFamily::lattice(g, std::max(1, m / 16), 4.0 * g.h(), std::sqrt(2.0), 12);
    FieldOp T = [](const SampledField& u) { return cz_apply(hilbert_kernel(), u); };
    const std::string wkind = cfg.option("weight", "a2");

    if (wkind == "a2") {
        auto w = Weight::power(g, 0.5, {0.0, 0.0});
        // base covers three octaves of support scales so its sup is already
        // near-converged; the extension interleaves fresh fields and scales
        std::vector<TestField> base;
        int k = 0;
        for (double hw : {2.0, 1.0, 0.5}) {
            auto part = test_family(g, 8, seed + std::uint64_t(k++), {0.0, 0.0}, hw);
            base.insert(base.end(), part.begin(), part.end());
        }
        std::vector<TestField> ext;
        for (double hw : {1.4142135623730951, 0.7071067811865476, 1.0}) {
            auto part = test_family(g, 8, seed + std::uint64_t(k++), {0.0, 0.0}, hw);
            ext.insert(ext.end(), part.begin(), part.end());
        }
        OpRatioReport r =
            norm_ratio_estimate(T, p, phi, phi, w, fam, base, ext, "hilbert_sqrt_weight");
        rep.constant("sup_ratio", r.max_ratio);
        rep.constant("extension_growth", r.growth);
        rep.add({"hilbert_bounded_between_morrey_norms", r.status, r.growth,
                 "sup ||Hf||/||f|| drift under test-family extension; " + r.note});
        rep.add(gate_le("ratio_growth_within_10pct", r.growth, 0.10,
                        "the sup must be stable when new scales join the family"));
    } else if (wkind == "cubic") {
        auto w = Weight::power(g, 3.0, {0.0, 0.0});
        // each level mixes generic probes with the weight-adapted profile
        // w^{-1/(p-1)}, capped at 1/32 of the support so the levels are exact
        // dilates of one another.  The smallest family ball stays fixed at 4h,
        // so once the core scale drops below it the probe norm can no longer
        // localize there while the profile's mass keeps growing -- exactly when
        // the dual-power integral diverges (alpha >= p-1).  An in-class weight
        // has integrable dual mass and the same sweep stays flat.
        const double h = g.h();
        const double expo = -3.0 / (p - 1.0);
        std::vector<double> sweep;
        for (int k = 0; k <= 4; ++k) {
            const double delta = 2.0 * std::pow(0.5, k);
            const double cap = std::max(delta / 32.0, h);
            auto probes = test_family(g, 4, seed + std::uint64_t(k), {0.0, 0.0}, delta);
            auto adapted = SampledField::from_function(g, [delta, cap, expo](Point y) {
                double s = std::abs(y[0]);
                if (s >= delta) return 0.0;
                return std::pow(std::max(s, cap), expo);
            });
            probes.push_back({"dual_weight_profile_delta_" + num(delta), adapted});
            OpRatioReport r = norm_ratio_estimate(T, p, phi, phi, w, fam, probes, {},
                                                  "hilbert_cubic_weight");
            sweep.push_back(r.max_ratio);
            rep.constant("sup_ratio_octave_" + std::to_string(k), r.max_ratio);
        }
        double growth = *std::max_element(sweep.begin(), sweep.end()) /
                        *std::min_element(sweep.begin(), sweep.end());
        rep.constant("sweep_growth_factor", growth);
        rep.add(pass_if(growth < 2.0, "hilbert_bounded_between_morrey_norms", growth,
                        "sup ratio across a 4-octave support sweep; growth >= 2 is "
                        "unboundedness evidence for the non-A_p weight"));
    } else {
        throw std::invalid_argument("unknown weight option: " + wkind);
    }
    return rep;
}

// ---- elliptic ------------------------------------------------------------------

Report exp_elliptic_mms(const ExperimentConfig& cfg) {
    Report rep;
    std::vector<int> meshes = {int(cfg.param("m0", 32)), int(cfg.param("m1", 64)),
                               int(cfg.param("m2", 128))};
    for (const auto& [tag, recipe] :
         {std::pair<std::string, ProblemRecipe>{"identity", recipe_identity()},
          {"diagonal", recipe_diag()},
          {"smooth_variable", recipe_smooth_variable()}}) {
        MMSReport r = mms_convergence(recipe, sine_product(), meshes);
        for (std::size_t k = 0; k < r.max_err.size(); ++k)
            rep.constant("max_err_" + tag + "_m_" + std::to_string(meshes[k]), r.max_err[k]);
        for (std::size_t k = 0; k < r.ratios.size(); ++k) {
            rep.constant("ratio_" + tag + "_" + std::to_string(k), r.ratios[k]);
            bool ok = r.ratios[k] >= 3.4 && r.ratios[k] <= 4.6;
            rep.add(pass_if(ok, "second_order_convergence_" + tag + "_level_" +
                                    std::to_string(k),
                            r.ratios[k], "error ratio per mesh halving, gate [3.4, 4.6]"));
        }
    }
    return rep;
}

Report exp_represent(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 128));
    Grid g = interior_grid(m);
    auto v = SampledField::from_function(g, [](Point x) {
        double dx = x[0] - 0.5, dy = x[1] - 0.5;
        return std::exp(-(dx * dx + dy * dy) / (0.12 * 0.12));
    });
    struct Comp {
        int i, j;
        double sphere;
    };
    for (const Comp& c : {Comp{0, 0, 0.5}, Comp{0, 1, 0.0}, Comp{1, 1, 0.5}}) {
        RepresentationReport r = representation_check(v, c.i, c.j);
        std::string tag = std::to_string(c.i + 1) + std::to_string(c.j + 1);
        rep.constant("rel_err_" + tag, r.max_rel_err);
        rep.constant("points_" + tag, double(r.points));
        rep.add(gate_le("sphere_term_matches_half_delta_" + tag,
                        std::abs(r.sphere_term - c.sphere), 1e-12,
                        "quadrature of the spherical correction term"));
        rep.add(gate_le("second_derivative_identity_" + tag, r.max_rel_err, 0.05,
                        "D_ij u vs singular convolution of the Laplacian, interior points"));
        rep.add(pass_if(r.points > 50, "enough_interior_points_" + tag, double(r.points),
                        "identity evaluated away from the boundary and small values"));
    }
    return rep;
}

Report exp_apriori(const ExperimentConfig& cfg) {
    Report rep;
    SmoothFn s = sine_product();
    auto f = [&s](const Point& x) { return s.uxx(x) + s.uyy(x); };
    std::vector<int> meshes = {int(cfg.param("m0", 64)), int(cfg.param("m1", 96)),
                               int(cfg.param("m2", 128))};
    const double p = cfg.param("p", 2.0);

    struct Pair {
        std::string tag;
        MorreyWeightFn phi;
        WeightFactory wf;
    };
    std::vector<Pair> pairs;
    pairs.push_back({"uniform", MorreyWeightFn::power(1.5),
                     [](const Grid& g) { return Weight::uniform(g); }});
    pairs.push_back({"power_weight", MorreyWeightFn::power(2.0),
                     [](const Grid& g) { return Weight::power(g, 0.5, {0.5, 0.5}); }});

    std::vector<std::pair<std::string, ProblemRecipe>> recipes = {
        {"identity", recipe_identity()},
        {"diagonal", recipe_diag()},
        {"smooth_variable", recipe_smooth_variable()},
        {"vmo_log", recipe_vmo_log()}};

    for (const auto& [ptag, phi, wf] : pairs) {
        for (const auto& [rtag, recipe] : recipes) {
            AprioriReport r = apriori_constant(recipe, f, p, phi, wf, meshes);
            std::string tag = rtag + "_" + ptag;
            rep.add(pass_if(r.preconditions_ok, "preconditions_hold_" + tag,
                            r.preconditions_ok ? 0.0 : 1.0, r.note));
            if (!r.preconditions_ok) continue;
            for (std::size_t k = 0; k < r.C_est.size(); ++k)
                rep.constant("C_est_" + tag + "_m_" + std::to_string(meshes[k]), r.C_est[k]);
            rep.add(gate_le("estimate_mesh_stable_" + tag, r.spread, 0.15,
                            "relative spread of ||D2u|| / (||u|| + ||f||) across meshes"));
        }
    }

    if (cfg.option("gate_demo", "on") == "on") {
        AprioriReport weak = apriori_constant(recipe_identity(), f, p,
                                              MorreyWeightFn::power(0.25), pairs[0].wf, {64});
        rep.add(pass_if(!weak.preconditions_ok &&
                            weak.note.find("growth condition") != std::string::npos,
                        "inadmissible_profile_refused", weak.preconditions_ok ? 1.0 : 0.0,
                        weak.note));
        AprioriReport badw = apriori_constant(
            recipe_identity(), f, p, pairs[0].phi,
            [](const Grid& g) { return Weight::power(g, 3.0, {0.5, 0.5}); }, {64});
        rep.add(pass_if(!badw.preconditions_ok &&
                            badw.note.find("A_p gate") != std::string::npos,
                        "inadmissible_weight_refused", badw.preconditions_ok ? 1.0 : 0.0,
                        badw.note));
    }
    return rep;
}

Report exp_interp(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 256));
    Grid g = interior_grid(m);
    Weight w = Weight::uniform(g);
    auto phi = MorreyWeightFn::power(1.5);
    const Point c{0.5, 0.5};
    std::vector<double> Cs;
    for (double r : {0.25, 0.125, 0.0625}) {
        auto fam = scaled_profiles(g, c, r);
        std::vector<double> deltas;
        for (double q : {0.1, 0.15, 0.22, 0.33, 0.5, 0.75}) deltas.push_back(q * r);
        InterpReport ir = interpolation_check(fam, 2.0, phi, w, c, r, deltas);
        Cs.push_back(ir.C_emp);
        rep.constant("C_emp_r_" + num(r), ir.C_emp);
    }
    rep.add(gate_le("constant_radius_stable", spread_of(Cs), 0.15,
                    "relative spread of the gradient-interpolation constant over the r sweep"));
    return rep;
}

Report exp_caccioppoli(const ExperimentConfig& cfg) {
    Report rep;
    const int m = int(cfg.param("m", 256));
    auto zero = [](const Point&) { return 0.0; };
    EllipticProblem PI = assemble(recipe_identity(), zero, m);
    EllipticProblem PV = assemble(recipe_smooth_variable(), zero, m);
    Weight w = Weight::uniform(PI.grid);
    auto phi = MorreyWeightFn::power(1.5);
    const Point c{0.5, 0.5};
    for (const auto& [tag, P] : {std::pair<std::string, const EllipticProblem*>{"identity", &PI},
                                 {"smooth_variable", &PV}}) {
        std::vector<double> Cs;
        for (double r : {0.25, 0.125, 0.0625}) {
            auto fam = scaled_profiles(P->grid, c, r);
            CaccioppoliReport cr = caccioppoli_check(*P, fam, 2.0, phi, w, c, r);
            Cs.push_back(cr.C_emp);
            rep.constant("C_emp_" + tag + "_r_" + num(r), cr.C_emp);
        }
        rep.add(gate_le("constant_radius_stable_" + tag, spread_of(Cs), 0.15,
                        "relative spread of the interior-energy constant over the r sweep"));
    }
    return rep;
}

}  // namespace

// ---- registry ------------------------------------------------------------------

const std::vector<ExperimentEntry>& experiment_entries() {
    static const std::vector<ExperimentEntry> entries = {
        {{"ap-constant", "Muckenhoupt characteristic: Lebesgue exactness, power-weight closed form",
          "1", "< 5 s", false},
         &exp_ap_constant},
        {{"ap-properties", "structural suite for power weights: duality gap, doubling, ordering",
          "2", "< 15 s", false},
         &exp_ap_properties},
        {{"bmo", "oscillation oracles: sgn norm, linear modulus, log mean drift", "3", "< 10 s",
          false},
         &exp_bmo},
        {{"vmo", "vanishing-oscillation modulus of the rough log-log symbol", "14", "< 10 s",
          false},
         &exp_vmo},
        {{"jn", "p-oscillation and weighted oscillation ratios under family extension", "4",
          "< 30 s", false},
         &exp_jn},
        {{"morrey-norm", "norm evaluation with per-ball detail and exact homogeneity", "",
          "< 5 s", false},
         &exp_morrey_norm},
        {{"check-pair", "profile growth conditions against closed forms; sub-threshold refusal",
          "8", "< 30 s", false},
         &exp_check_pair},
        {{"hardy", "two-weight best constant and random sharpness search", "7", "< 30 s", true},
         &exp_hardy},
        {{"maximal", "maximal function oracles and ball-mean domination", "", "< 10 s", false},
         &exp_maximal},
        {{"cz", "singular convolution: kernel invariants, closed form, translation covariance",
          "5", "< 30 s", false},
         &exp_cz},
        {{"commutator", "commutator oracles and local smallness for a vanishing-oscillation "
          "symbol",
          "14", "< 60 s", false},
         &exp_commutator},
        {{"reflect", "coefficient reflection: identity exactness, finite distance ratios", "9",
          "< 15 s", true},
         &exp_reflect},
        {{"nonsingular", "reflected-kernel operator: closed form and sublinear bound", "",
          "< 15 s", false},
         &exp_nonsingular},
        {{"op-ratio", "empirical Morrey operator norm of the Hilbert transform", "6", "< 60 s",
          true},
         &exp_op_ratio},
        {{"elliptic-mms", "manufactured-solution convergence for the interior solver", "10",
          "< 60 s", false},
         &exp_elliptic_mms},
        {{"represent", "interior second derivatives vs singular convolution identity", "11",
          "< 60 s", false},
         &exp_represent},
        {{"apriori", "interior estimate constant across meshes, problems, and pairs; gates",
          "12", "< 10 min", false},
         &exp_apriori},
        {{"interp", "gradient interpolation constant over a radius sweep", "13", "< 60 s",
          false},
         &exp_interp},
        {{"caccioppoli", "interior energy constant over a radius sweep", "13", "< 60 s", false},
         &exp_caccioppoli},
    };
    return entries;
}

}  // namespace morrey
