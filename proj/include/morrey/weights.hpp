#pragma once

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "morrey/ball_ops.hpp"
#include "morrey/field.hpp"
#include "morrey/geometry.hpp"

namespace morrey {

// w(x) = |x - center|^alpha. alpha == 0 is the uniform weight (Lebesgue).
struct PowerLaw {
    double alpha = 0.0;
    Point center{0.0, 0.0};
};

// Positive a.e. weight sampled on a grid. When the analytic power-law
// descriptor is present, the cell containing the singular point carries the
// exact cell average of w (and of any power w^sigma on request), so discrete
// A_p products stay faithful where the midpoint rule would see 0 or infinity.
class Weight {
public:
    static Weight uniform(const Grid& g);
    static Weight power(const Grid& g, double alpha, Point center);
    static Weight from_field(SampledField f);  // strictly positive values required

    const Grid& grid() const { return field_.grid(); }
    const SampledField& field() const { return field_; }
    const std::vector<double>& values() const { return field_.values(); }
    const std::optional<PowerLaw>& descriptor() const { return analytic_; }

    // Cached arrays of w^sigma with the singular cell replaced by its exact
    // cell average; entries may be +inf when the power is non-integrable.
    const std::vector<double>& pow_values(double sigma) const;

    // w-measure of B (midpoint rule + singular-cell substitution).
    double measure(const Ball& b) const;
    // integral over B of w^sigma.
    double pow_measure(const Ball& b, double sigma) const;

    // w(B) for arbitrary balls, off-grid included: closed form in 1D, radial
    // arc quadrature in 2D (per-center log-radius cache). Requires the
    // analytic descriptor; tabulated-only weights fall back to the grid and
    // refuse balls that leave it.
    double measure_extrapolated(const Ball& b) const;

    bool has_analytic() const { return analytic_.has_value(); }

private:
    explicit Weight(SampledField f, std::optional<PowerLaw> a);
    SampledField field_;
    std::optional<PowerLaw> analytic_;
    mutable std::map<double, std::vector<double>> pow_cache_;
    struct Profile {
        std::vector<double> log_s, log_w;
    };
    mutable std::map<std::pair<double, double>, Profile> profile_cache_;
};

constexpr double kDivergedSentinel = std::numeric_limits<double>::infinity();
constexpr double kOverflowGuard = 1e30;

struct BallValue {
    Ball ball;
    double value;
};

struct ApReport {
    double p = 2.0;
    double characteristic = 1.0;  // +inf sentinel when w fails A_p on some ball
    bool diverged = false;
    Ball argmax;
    std::vector<BallValue> per_ball;
    std::string note;
};

// sup over the family of (mean_B w) * (mean_B w^{-1/(p-1)})^{p-1}, both means
// normalized by the measured cell-count volume of B.
ApReport ap_characteristic(const Weight& w, double p, const BallFamily& F);

struct PropertyItem {
    std::string id;
    std::string status;  // PASS / FAIL / INFO / SKIPPED
    double measured = 0.0;
    std::string detail;
};

struct PropertyReport {
    std::vector<PropertyItem> items;
    bool all_ok() const {
        for (const auto& it : items)
            if (it.status == "FAIL") return false;
        return true;
    }
};

// Structural checks attached to the A_p characteristic: per-ball lower bound,
// duality, class ordering (measured, reported, not asserted), doubling,
// measure-comparison exponent fit, and the A_infty placeholder.
PropertyReport ap_property_suite(const Weight& w, double p, const BallFamily& F);

}  // namespace morrey
