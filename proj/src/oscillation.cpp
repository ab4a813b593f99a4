#include "morrey/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "morrey/ball_ops.hpp"

namespace morrey {

namespace {

// Count of cells that actually contribute: mask sum when masked, else all.
double live_count(const SampledField& a, const Ball& b) {
    const Grid& g = a.grid();
    if (a.has_mask()) return ball_sum(g, a.mask(), b);
    return double(ball_cell_count(g, b));
}

double osc_or_nan(const SampledField& a, const Ball& b, double p) {
    double cnt = live_count(a, b);
    if (!(cnt > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const Grid& g = a.grid();
    const double* mu = a.has_mask() ? a.mask().data() : nullptr;
    double m = ball_dot(g, a.values(), mu, b) / cnt;
    double s = ball_abs_dev_pow_dot(g, a.values(), m, p, mu, b) / cnt;
    return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

struct FamilyMax {
    double value = 0.0;
    Ball argmax;
    int used = 0;
    int skipped = 0;
    std::vector<BallValue> per_ball;
};

template <class PerBall>
FamilyMax family_max(const BallFamily& F, bool keep_detail, PerBall&& eval) {
    FamilyMax out;
    for (const Ball& b : F.balls()) {
        double v = eval(b);
        if (std::isnan(v)) {
            ++out.skipped;
            continue;
        }
        ++out.used;
        if (keep_detail) out.per_ball.push_back({b, v});
        if (out.used == 1 || v > out.value) {
            out.value = v;
            out.argmax = b;
        }
    }
    return out;
}

// One octave up in radius and 2x center density when the grid allows it;
// otherwise an octave down (or a plain densification) so the stability probe
// always has somewhere to go. The substitution is reported in `note`.
BallFamily stability_family(const BallFamily& F, const Grid& g, std::string* note) {
    int extra = int(std::ceil(std::log(2.0) / std::log(F.ratio) - 1e-12));
    if (F.center_stride >= 1) {
        try {
            return F.extended(g);
        } catch (const std::exception&) {
        }
        double down = F.r_min / std::pow(F.ratio, extra);
        int stride = std::max(1, F.center_stride / 2);
        if (down >= 4.0 * g.h() - 1e-12 * g.h()) {
            *note = "no room above the family; extended one octave down instead";
            return BallFamily::lattice(g, stride, down, F.ratio, F.count + extra, F.interior);
        }
        *note = "no radius room either way; densified centers only";
        return BallFamily::lattice(g, stride, F.r_min, F.ratio, F.count, F.interior);
    }
    BallFamily e = F;  // manual centers: radii up one octave, balls may clip
    e.count += extra;
    *note = "manual family: extended in radius only";
    return e;
}

RatioReport ratio_report(std::string id, const Grid& g, const BallFamily& F,
                         const std::function<double(const Ball&)>& eval) {
    RatioReport rep;
    rep.id = std::move(id);
    FamilyMax base = family_max(F, true, eval);
    if (base.used == 0) throw std::runtime_error("all balls under-resolved");
    rep.max_ratio = base.value;
    rep.argmax = base.argmax;
    rep.per_ball = std::move(base.per_ball);
    if (!std::isfinite(rep.max_ratio)) {
        rep.status = "FAIL";
        rep.note = "ratio not finite";
        return rep;
    }
    FamilyMax ext = family_max(stability_family(F, g, &rep.note), false, eval);
    rep.extended_ratio = ext.value;
    rep.growth = rep.max_ratio > 0.0 ? ext.value / rep.max_ratio - 1.0 : 0.0;
    auto add_note = [&](const char* msg) {
        if (!rep.note.empty()) rep.note += "; ";
        rep.note += msg;
    };
    if (!std::isfinite(ext.value)) {
        rep.status = "FAIL";
        add_note("ratio not finite on extended family");
    } else if (rep.growth > 0.10) {
        rep.status = "INCONCLUSIVE";
        add_note("sup grew more than 10% under family extension");
    } else {
        rep.status = "PASS";
    }
    return rep;
}

}  // namespace

double ball_oscillation(const SampledField& a, const Ball& b, double p) {
    double v = osc_or_nan(a, b, p);
    if (std::isnan(v)) throw std::runtime_error("ball under-resolved");
    return v;
}

BmoResult bmo_norm(const OscillationFn& a) {
    FamilyMax m = family_max(a.family, false,
                             [&](const Ball& b) { return osc_or_nan(a.field, b, 1.0); });
    if (m.used == 0) throw std::runtime_error("all balls under-resolved");
    return {m.value, m.argmax, m.used, m.skipped};
}

std::vector<std::pair<double, double>> vmo_modulus(const OscillationFn& a,
                                                   const std::vector<double>& R_list) {
    const BallFamily& F = a.family;
    for (double R : R_list)
        if (R < F.r_min * (1.0 - 1e-12) || R > F.r_max() * (1.0 + 1e-12))
            throw std::invalid_argument("R outside family radius range");
    std::vector<std::pair<double, double>> out;
    out.reserve(R_list.size());
    for (double R : R_list) {
        double best = 0.0;
        int used = 0;
        for (const auto& c : F.centers)
            for (double r : F.radii()) {
                if (r > R * (1.0 + 1e-12)) continue;
                double v = osc_or_nan(a.field, {c, r}, 1.0);
                if (std::isnan(v)) continue;
                ++used;
                best = std::max(best, v);
            }
        if (used == 0) throw std::runtime_error("all balls under-resolved");
        out.emplace_back(R, best);
    }
    return out;
}

RatioReport jn_check(const OscillationFn& a, double p, const BallFamily& F) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in (1, inf)");
    double bmo = bmo_norm(a).norm;
    double scale = 0.0;
    for (double v : a.field.values()) scale = std::max(scale, std::abs(v));
    if (bmo <= 1e-14 * std::max(scale, 1.0))
        throw std::runtime_error("constant function: bmo norm vanishes");
    return ratio_report("john_nirenberg_ratio", a.field.grid(), F, [&](const Ball& b) {
        double v = osc_or_nan(a.field, b, p);
        return std::isnan(v) ? v : v / bmo;
    });
}

double mean_drift_check(const OscillationFn& a, double r, double t, std::optional<Point> center) {
    if (!(r > 0.0 && t > 2.0 * r)) throw std::invalid_argument("need 0 < 2r < t");
    Point c = center.value_or(a.family.centers.at(0));
    const SampledField& f = a.field;
    double m_r = mean_ball(f, {c, r});
    double m_t = mean_ball(f, {c, t});
    double bmo = bmo_norm(a).norm;
    double scale = 0.0;
    for (double v : f.values()) scale = std::max(scale, std::abs(v));
    if (bmo <= 1e-14 * std::max(scale, 1.0)) return 0.0;  // constants drift nowhere
    return std::abs(m_r - m_t) / (bmo * std::log(t / r));
}

std::vector<RatioReport> weighted_bmo_check(const OscillationFn& a, const Weight& w, double p,
                                            const BallFamily& F) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in (1, inf)");
    if (!a.field.grid().same_layout(w.grid()))
        throw std::invalid_argument("weight and function live on different grids");
    double bmo = bmo_norm(a).norm;
    double scale = 0.0;
    for (double v : a.field.values()) scale = std::max(scale, std::abs(v));
    if (bmo <= 1e-14 * std::max(scale, 1.0))
        throw std::runtime_error("constant function: bmo norm vanishes");

    const Grid& g = a.field.grid();
    const double pp = p / (p - 1.0);
    ApReport ap = ap_characteristic(w, p, F);

    // Combine the weight (or its dual power) with the support mask where
    // present, so one multiplier array serves each reduction.
    auto multiplier = [&](const std::vector<double>& base) {
        std::vector<double> mu = base;
        if (a.field.has_mask())
            for (std::size_t i = 0; i < mu.size(); ++i) mu[i] *= a.field.mask()[i];
        return mu;
    };
    std::vector<double> mu_w = multiplier(w.values());
    std::vector<double> mu_s = multiplier(w.pow_values(1.0 - pp));

    auto weighted_osc = [&](const Ball& b, const std::vector<double>& mu, double q) {
        double denom = ball_sum(g, mu, b);
        double live = live_count(a.field, b);
        if (!(live > 0.0) || !(denom > 0.0) || !std::isfinite(denom))
            return std::numeric_limits<double>::quiet_NaN();
        const double* mk = a.field.has_mask() ? a.field.mask().data() : nullptr;
        double m = ball_dot(g, a.field.values(), mk, b) / live;
        double s = ball_abs_dev_pow_dot(g, a.field.values(), m, q, mu.data(), b);
        return std::pow(s / denom, 1.0 / q);
    };

    std::vector<RatioReport> out;
    out.push_back(ratio_report("weighted_oscillation_p", g, F, [&](const Ball& b) {
        double v = weighted_osc(b, mu_w, p);
        return std::isnan(v) ? v : v / bmo;
    }));
    if (ap.diverged) {
        RatioReport rep;
        rep.id = "dual_weighted_oscillation";
        rep.status = "FAIL";
        rep.note = "weight fails A_p on the family; dual ratio undefined";
        out.push_back(rep);
    } else {
        double norm2 = std::pow(ap.characteristic, 1.0 / p) * bmo;
        out.push_back(ratio_report("dual_weighted_oscillation", g, F, [&](const Ball& b) {
            double v = weighted_osc(b, mu_s, pp);
            return std::isnan(v) ? v : v / norm2;
        }));
    }
    return out;
}

}  // namespace morrey
