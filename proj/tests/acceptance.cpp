// Acceptance gate: fourteen numbered end-to-end checks, each at its pinned
// tolerance and runtime budget. Prints exactly one line per criterion,
//
//     [PASS|FAIL] criterion N — description (X.Xs)
//
// plus an indented note when a criterion fails, and exits nonzero if any
// criterion fails. Numeric criteria rebuild their configurations here so the
// gates stay pinned even if experiment defaults move; pipeline criteria drive
// the public experiment API and re-assert the pinned bounds on the reported
// constants.

#include <algorithm>
#include <chrono>
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
#include "morrey/weights.hpp"

using namespace morrey;

namespace {

// ---- small shared helpers --------------------------------------------------------

Grid offset_line(double lo, double hi, int n) {
    double h = (hi - lo) / n;
    return Grid::line(lo + 0.5 * h, h, n);
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

Report run_cfg(const std::string& json) {
    return run(ExperimentConfig::from_json_text(json));
}

double get_constant(const Report& rep, const std::string& name) {
    for (const auto& [k, v] : rep.constants)
        if (k == name) return v;
    return std::numeric_limits<double>::quiet_NaN();
}

bool assertion_passed(const Report& rep, const std::string& id) {
    for (const auto& a : rep.assertions)
        if (a.id == id) return a.status == "PASS";
    return false;
}

// accumulates failures so a criterion reports every violated bound at once
struct Checker {
    bool ok = true;
    std::string note;
    void expect(bool cond, const std::string& what) {
        if (cond) return;
        ok = false;
        if (!note.empty()) note += "; ";
        note += what;
    }
    void within(double value, double target, double rel, const std::string& what) {
        expect(std::isfinite(value) && std::abs(value - target) <= rel * std::abs(target),
               what + " = " + std::to_string(value) + " not within " +
                   std::to_string(100.0 * rel) + "% of " + std::to_string(target));
    }
    void at_most(double value, double limit, const std::string& what) {
        expect(std::isfinite(value) && value <= limit,
               what + " = " + std::to_string(value) + " exceeds " + std::to_string(limit));
    }
};

// ---- criteria ---------------------------------------------------------------------

// 1: Muckenhoupt characteristic — uniform weight exactly 1; |x|^{1/2} at p = 2,
//    h = 2^-10 matches its closed form 4/3 within 2%.
Checker crit1() {
    Checker c;
    Grid g = offset_line(-1.0, 1.0, 2048);  // h = 2^-10
    auto lattice = BallFamily::lattice(g, 64, 4.0 * g.h(), std::sqrt(2.0), 8);
    ApReport ru = ap_characteristic(Weight::uniform(g), 2.0, lattice);
    c.at_most(std::abs(ru.characteristic - 1.0), 1e-8, "uniform characteristic deviation");

    int count = int(std::floor(std::log(0.5 / (4.0 * g.h())) / std::log(std::sqrt(2.0)))) + 1;
    auto centered = centers_family({{0.0, 0.0}}, 4.0 * g.h(), count);
    ApReport rp = ap_characteristic(Weight::power(g, 0.5, {0.0, 0.0}), 2.0, centered);
    c.expect(!rp.diverged, "power characteristic diverged");
    c.within(rp.characteristic, 4.0 / 3.0, 0.02, "characteristic of |x|^{1/2}");
    return c;
}

// 2: duality — the dual-power characteristic matches [w]^{p'-1} within 2% on
//    five power weights.
Checker crit2() {
    Checker c;
    Report rep = run_cfg(R"({"experiment": "ap-properties"})");
    c.expect(rep.overall() == "PASS", "ap-properties overall " + rep.overall());
    int gaps = 0;
    for (const auto& [k, v] : rep.constants)
        if (k.rfind("duality_gap_", 0) == 0) {
            ++gaps;
            c.at_most(v, 0.02, k);
        }
    c.expect(gaps == 5, "expected 5 duality gaps, saw " + std::to_string(gaps));
    return c;
}

// 3: oscillation baselines — ||sgn||_* = 1 +- 2%; the linear symbol's modulus
//    equals R/2 +- 2% on exact family radii; centered means of ln|x| drift by
//    ln(t/r) within 1e-3 for r, t >= 32h.
Checker crit3() {
    Checker c;
    Grid g = offset_line(-1.0, 1.0, 2048);  // h = 2^-10
    auto sgn = SampledField::from_function(
        g, [](Point p) { return p[0] > 0.0 ? 1.0 : (p[0] < 0.0 ? -1.0 : 0.0); });
    auto fam_sgn = centers_family({{0.0, 0.0}, {0.1, 0.0}, {-0.35, 0.0}}, 4.0 * g.h(), 12);
    c.within(bmo_norm({sgn, fam_sgn}).norm, 1.0, 0.02, "sign-function mean oscillation");

    auto lin = SampledField::from_function(g, [](Point p) { return p[0]; });
    auto fam_lin = centers_family({{0.0, 0.0}}, 1.0 / 16.0, 4, 2.0);  // radii 1/16 .. 1/2
    OscillationFn al{lin, fam_lin};
    for (auto [R, v] : vmo_modulus(al, {1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0}))
        c.within(v, R / 2.0, 0.02, "linear modulus at R = " + std::to_string(R));

    auto ln = exact_ln_field(g);
    auto fam_ln = centers_family({{0.0, 0.0}}, 4.0 * g.h(), 15);
    OscillationFn aln{ln, fam_ln};
    double bmo = bmo_norm(aln).norm;
    const double r = 1.0 / 16.0, t = 1.0 / 2.0;  // both >= 32h = 1/32... r = 2*32h
    double raw = mean_drift_check(aln, r, t) * bmo * std::log(t / r);
    c.at_most(std::abs(raw - std::log(t / r)), 1e-3, "centered-mean drift vs ln(t/r)");
    return c;
}

// 4: John-Nirenberg and weighted oscillation ratios stay finite and drift at
//    most 10% under a one-octave family extension for {sgn, ln|x|} x
//    {uniform, |x|^{1/2}}.
Checker crit4() {
    Checker c;
    Report rep = run_cfg(R"({"experiment": "jn"})");
    c.expect(rep.overall() == "PASS", "jn overall " + rep.overall());
    int stable = 0;
    for (const auto& a : rep.assertions) {
        c.expect(a.status == "PASS", a.id + " " + a.status);
        if (a.id.find("_stable_") != std::string::npos ||
            a.id.rfind("jn_ratio_stable", 0) == 0) {
            ++stable;
            c.at_most(a.measured, 0.10, a.id + " drift");
        }
    }
    c.expect(stable >= 6, "expected >= 6 extension-drift assertions, saw " +
                              std::to_string(stable));
    for (const auto& [k, v] : rep.constants)
        c.expect(std::isfinite(v) && v > 0.0, k + " not finite/positive");
    return c;
}

// 5: the discrete Hilbert transform of an indicator matches its closed form
//    within 2% at every point >= 5h from the jumps, h = 2^-10.
Checker crit5() {
    Checker c;
    Grid g = offset_line(-4.0, 4.0, 8192);  // h = 2^-10
    auto f = SampledField::from_function(
        g, [](Point p) { return (p[0] > -1.0 && p[0] < 1.0) ? 1.0 : 0.0; });
    SampledField Hf = cz_apply(hilbert_kernel(), f);
    const double guard = 5.0 * g.h();
    double worst = 0.0;
    for (int i = 0; i < g.size(0); ++i) {
        double x = g.coord(0, i);
        if (std::min(std::abs(x - 1.0), std::abs(x + 1.0)) < guard) continue;
        double exact = (1.0 / M_PI) * std::log(std::abs((x + 1.0) / (x - 1.0)));
        worst = std::max(worst,
                         std::abs(Hf.values()[std::size_t(i)] - exact) / std::abs(exact));
    }
    c.at_most(worst, 0.02, "worst relative error vs closed form");
    return c;
}

// 6: weighted boundedness dichotomy for the Hilbert transform — with
//    w = |x|^{1/2} the norm-ratio sup is stable (<= 10%) under test-family
//    extension; with w = |x|^3 the sup grows >= 2x across a 4-octave support
//    sweep toward 0 and the experiment reports FAIL with the growth evidence.
Checker crit6() {
    Checker c;
    Report stable = run_cfg(R"({"experiment": "op-ratio", "seed": 42})");
    c.expect(stable.overall() == "PASS", "in-class arm overall " + stable.overall());
    c.at_most(get_constant(stable, "extension_growth"), 0.10, "in-class extension growth");

    Report grower = run_cfg(
        R"({"experiment": "op-ratio", "seed": 42, "options": {"weight": "cubic"}})");
    c.expect(grower.any_fail(), "out-of-class arm must report FAIL");
    double growth = get_constant(grower, "sweep_growth_factor");
    c.expect(std::isfinite(growth) && growth >= 2.0,
             "support-sweep growth " + std::to_string(growth) + " below 2x");
    return c;
}

// 7: weighted Hardy operator — the evaluated best constant matches the closed
//    form within 1% on three analytic triples; a seeded random search over
//    nondecreasing profiles reaches >= 85% of B and no candidate exceeds 1.05 B.
Checker crit7() {
    Checker c;
    struct Named {
        const char* tag;
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
        c.within(best.B, closed_B, 0.01, std::string("best constant, ") + tag);
        SharpnessResult res = hardy_sharpness_search(triple, 24, 20260825u);
        c.expect(res.best_ratio >= 0.85 * res.B,
                 std::string(tag) + " search reached only " +
                     std::to_string(res.best_ratio / res.B) + " of B");
        c.at_most(res.worst_slack, 1.05, std::string(tag) + " worst candidate / B");
    }
    return c;
}

// 8: sufficiency-condition evaluator — the empirical constant matches 1/beta
//    (weighted form) and 1/beta + 1/beta^2 (log form) within 5%, truncation
//    doubling moves the integrals <= 10%, and a profile decaying slower than
//    the threshold is rejected with FAIL.
Checker crit8() {
    Checker c;
    Report rep = run_cfg(R"({"experiment": "check-pair"})");
    c.expect(rep.overall() == "PASS", "check-pair overall " + rep.overall());
    const double beta = 1.5;
    c.within(get_constant(rep, "weighted_C"), 1.0 / beta, 0.05, "weighted-form constant");
    c.within(get_constant(rep, "weighted_log_C"), 1.0 / beta + 1.0 / (beta * beta), 0.05,
             "log-form constant");
    c.at_most(get_constant(rep, "weighted_consistency"), 0.10, "weighted truncation drift");
    c.at_most(get_constant(rep, "weighted_log_consistency"), 0.10, "log truncation drift");
    c.expect(assertion_passed(rep, "sub_threshold_profile_rejected"),
             "sub-threshold profile was not rejected");
    return c;
}

// 9: reflection map — identity coefficients reflect to the mirror point
//    exactly; for a wavy SPD field with ellipticity 4 the distance-ratio
//    bounds are finite and move <= 5% when the sample count doubles 1e4 -> 2e4.
Checker crit9() {
    Checker c;
    ReflectBounds ident = reflect_bounds_check(identity_reflection(2), 2000, 99);
    c.expect(ident.c1 == 1.0 && ident.c2 == 1.0, "identity bounds not exactly 1");

    ReflectionMap R;
    R.dim = 2;
    R.lambda = 4.0;
    R.coeff = [](const Point& y) {
        double th = 0.7 * std::sin(1.3 * y[0] + 0.9 * y[1]);
        double l1 = 0.25 + 3.75 * (0.5 + 0.5 * std::sin(2.1 * y[0] - 0.7 * y[1] + 0.3));
        double l2 = 0.25 + 3.75 * (0.5 + 0.5 * std::cos(1.1 * y[0] + 1.9 * y[1]));
        double cth = std::cos(th), sth = std::sin(th);
        return std::array<double, 3>{cth * cth * l1 + sth * sth * l2, cth * sth * (l1 - l2),
                                     sth * sth * l1 + cth * cth * l2};
    };
    ReflectBounds r1 = reflect_bounds_check(R, 10000, 20260825u);
    ReflectBounds r2 = reflect_bounds_check(R, 20000, 20260825u);
    c.expect(r1.c1 > 0.0 && std::isfinite(r1.c2), "bounds not finite/positive");
    c.within(r2.c1 / r1.c1, 1.0, 0.05, "lower bound movement under doubling");
    c.within(r2.c2 / r1.c2, 1.0, 0.05, "upper bound movement under doubling");
    return c;
}

// 10: manufactured-solution convergence — max-norm error ratios per mesh
//     halving stay in [3.4, 4.6] over h = 1/32, 1/64, 1/128 for identity,
//     diagonal, and smooth-variable coefficients.
Checker crit10() {
    Checker c;
    for (const auto& [tag, recipe] :
         {std::pair<const char*, ProblemRecipe>{"identity", recipe_identity()},
          {"diagonal", recipe_diag()},
          {"smooth_variable", recipe_smooth_variable()}}) {
        MMSReport r = mms_convergence(recipe, sine_product(), {32, 64, 128});
        for (double ratio : r.ratios)
            c.expect(ratio >= 3.4 && ratio <= 4.6,
                     std::string(tag) + " ratio " + std::to_string(ratio) +
                         " outside [3.4, 4.6]");
    }
    return c;
}

// 11: second-derivative representation — D_ij u agrees with the singular
//     convolution of the Laplacian plus the spherical term within 5% at
//     interior points, h = 1/128; the spherical term itself is exact.
Checker crit11() {
    Checker c;
    Grid g = interior_grid(128);
    auto v = SampledField::from_function(g, [](Point x) {
        double dx = x[0] - 0.5, dy = x[1] - 0.5;
        return std::exp(-(dx * dx + dy * dy) / (0.12 * 0.12));
    });
    struct Comp {
        int i, j;
        double sphere;
    };
    for (const Comp& comp : {Comp{0, 0, 0.5}, Comp{0, 1, 0.0}, Comp{1, 1, 0.5}}) {
        RepresentationReport r = representation_check(v, comp.i, comp.j);
        std::string tag = std::to_string(comp.i + 1) + std::to_string(comp.j + 1);
        c.at_most(std::abs(r.sphere_term - comp.sphere), 1e-12, "sphere term D" + tag);
        c.at_most(r.max_rel_err, 0.05, "identity error D" + tag);
        c.expect(r.points > 50, "D" + tag + " evaluated at only " +
                                    std::to_string(r.points) + " points");
    }
    return c;
}

// 12: interior a-priori estimate — the measured constant spreads <= 15% across
//     three meshes for four coefficient recipes x two (profile, weight) pairs,
//     and the admissibility gates refuse an inadmissible profile and weight.
Checker crit12() {
    Checker c;
    Report rep = run_cfg(R"({"experiment": "apriori"})");
    c.expect(rep.overall() == "PASS", "apriori overall " + rep.overall());
    int combos = 0, preconds = 0;
    for (const auto& a : rep.assertions) {
        if (a.id.rfind("estimate_mesh_stable_", 0) == 0) {
            ++combos;
            c.expect(a.status == "PASS", a.id + " " + a.status);
            c.at_most(a.measured, 0.15, a.id + " spread");
        }
        if (a.id.rfind("preconditions_hold_", 0) == 0) {
            ++preconds;
            c.expect(a.status == "PASS", a.id + " " + a.status);
        }
    }
    c.expect(combos == 8, "expected 8 recipe x pair combinations, saw " +
                              std::to_string(combos));
    c.expect(preconds == 8, "expected 8 precondition checks, saw " +
                                std::to_string(preconds));
    c.expect(assertion_passed(rep, "inadmissible_profile_refused"),
             "profile admissibility gate not enforced");
    c.expect(assertion_passed(rep, "inadmissible_weight_refused"),
             "weight admissibility gate not enforced");
    return c;
}

// 13: localization constants — the gradient-interpolation constant and the
//     interior-energy constant are r-independent within 15% over
//     r in {1/4, 1/8, 1/16}.
Checker crit13() {
    Checker c;
    Report ri = run_cfg(R"({"experiment": "interp"})");
    c.expect(ri.overall() == "PASS", "interp overall " + ri.overall());
    for (const auto& a : ri.assertions)
        if (a.id == "constant_radius_stable") c.at_most(a.measured, 0.15, "interp spread");

    Report rc = run_cfg(R"({"experiment": "caccioppoli"})");
    c.expect(rc.overall() == "PASS", "caccioppoli overall " + rc.overall());
    int seen = 0;
    for (const auto& a : rc.assertions)
        if (a.id.rfind("constant_radius_stable_", 0) == 0) {
            ++seen;
            c.at_most(a.measured, 0.15, a.id + " spread");
        }
    c.expect(seen == 2, "expected 2 energy-constant sweeps, saw " + std::to_string(seen));
    return c;
}

// 14: commutator with a vanishing-oscillation symbol — the local norm ratio
//     over shrinking windows is nonincreasing within 5% noise as r halves,
//     and the symbol's oscillation modulus itself decays toward small radii.
Checker crit14() {
    Checker c;
    Report rep = run_cfg(R"({"experiment": "commutator"})");
    c.expect(rep.overall() == "PASS", "commutator overall " + rep.overall());
    const std::vector<double> radii = {0.25, 0.125, 0.0625, 0.03125};
    std::vector<double> rho;
    for (double r : radii) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%g", r);
        rho.push_back(get_constant(rep, std::string("local_ratio_r_") + buf));
    }
    for (std::size_t k = 0; k + 1 < rho.size(); ++k) {
        c.expect(std::isfinite(rho[k]) && rho[k] > 0.0, "missing local ratio");
        c.at_most(rho[k + 1] / rho[k], 1.05, "ratio step r=" + std::to_string(radii[k + 1]));
    }

    Report rv = run_cfg(R"({"experiment": "vmo"})");
    c.expect(rv.overall() == "PASS", "vmo overall " + rv.overall());
    return c;
}

}  // namespace

int main() {
    struct Entry {
        int num;
        const char* desc;
        double budget_s;
        Checker (*fn)();
    };
    const std::vector<Entry> entries = {
        {1, "Muckenhoupt characteristic: uniform weight exact, |x|^{1/2} matches 4/3", 10.0,
         crit1},
        {2, "power-weight duality gap within 2% on five exponents", 30.0, crit2},
        {3, "oscillation baselines: sign norm, linear modulus, log mean drift", 30.0, crit3},
        {4, "John-Nirenberg and weighted ratios stable under family extension", 120.0, crit4},
        {5, "Hilbert transform of an indicator matches its closed form", 30.0, crit5},
        {6, "weighted boundedness dichotomy: stable in class, >= 2x growth outside", 180.0,
         crit6},
        {7, "weighted Hardy operator: best constant and sharpness search", 60.0, crit7},
        {8, "sufficiency-condition constants, truncation stability, rejection", 60.0, crit8},
        {9, "reflection map: identity exact, distance ratios stable under doubling", 30.0,
         crit9},
        {10, "manufactured solutions converge at second order on three recipes", 120.0,
         crit10},
        {11, "interior second derivatives match the convolution identity", 180.0, crit11},
        {12, "a-priori constant mesh-stable across problems and pairs; gates enforced",
         600.0, crit12},
        {13, "interpolation and interior-energy constants r-independent", 120.0, crit13},
        {14, "commutator local ratio nonincreasing as the window shrinks", 120.0, crit14},
    };

    int failures = 0;
    for (const auto& e : entries) {
        auto t0 = std::chrono::steady_clock::now();
        Checker c;
        try {
            c = e.fn();
        } catch (const std::exception& ex) {
            c.ok = false;
            c.note = std::string("exception: ") + ex.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
        if (secs > e.budget_s) {
            c.ok = false;
            if (!c.note.empty()) c.note += "; ";
            c.note += "over the " + std::to_string(e.budget_s) + "s budget";
        }
        std::printf("[%s] criterion %d — %s (%.1fs)\n", c.ok ? "PASS" : "FAIL", e.num, e.desc,
                     secs);
        if (!c.ok) {
            std::printf("       note: %s\n", c.note.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures > 0) std::printf("%d of 14 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
