#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morrey/field.hpp"
#include "morrey/geometry.hpp"
#include "morrey/weights.hpp"

namespace morrey {

// A function together with the ball family that realizes its "sup over balls".
struct OscillationFn {
    SampledField field;
    BallFamily family;
};

// (mean over B of |a - a_B|^p)^{1/p} with the unweighted ball mean a_B.
// Masked cells drop out of both the mean and the deviation sum.
// Throws "ball under-resolved" when B captures no (unmasked) cells.
double ball_oscillation(const SampledField& a, const Ball& b, double p = 1.0);

struct BmoResult {
    double norm = 0.0;
    Ball argmax;
    int used = 0;
    int skipped = 0;  // under-resolved balls, skipped rather than fatal
};

// max over the family of the per-ball mean oscillation (p = 1).
// Throws when every ball in the family is under-resolved.
BmoResult bmo_norm(const OscillationFn& a);

// gamma(R) = max over family balls of radius <= R; nondecreasing in R and
// equal to the bmo norm once R reaches the largest family radius.
std::vector<std::pair<double, double>> vmo_modulus(const OscillationFn& a,
                                                   const std::vector<double>& R_list);

// Shared shape for normalized-oscillation suprema. `max_ratio` is the sup
// over F, `extended_ratio` the same sup over F extended one octave in radius
// and 2x in center density; `growth` is their relative gap, and the status
// turns INCONCLUSIVE when the sup moves more than 10% under that extension.
struct RatioReport {
    std::string id;
    std::string status;  // PASS / FAIL / INCONCLUSIVE
    double max_ratio = 0.0;
    double extended_ratio = 0.0;
    double growth = 0.0;
    Ball argmax;
    std::vector<BallValue> per_ball;
    std::string note;
};

// per ball: (mean_B |a - a_B|^p)^{1/p} / bmo_norm(a).
// Throws "constant function" when the bmo norm vanishes.
RatioReport jn_check(const OscillationFn& a, double p, const BallFamily& F);

// |a_{B_r} - a_{B_t}| / (bmo * ln(t/r)) at a common center (default: the
// family's first center). Requires 0 < 2r < t. A constant function returns 0.
double mean_drift_check(const OscillationFn& a, double r, double t,
                        std::optional<Point> center = std::nullopt);

// Two weighted oscillation suprema, both normalized by the plain bmo norm:
//   [0] (w(B)^{-1} int_B |a-a_B|^p w)^{1/p} / bmo
//   [1] (s(B)^{-1}  int_B |a-a_B|^{p'} s)^{1/p'} / ([w]_{A_p}^{1/p} * bmo),
//       s = w^{1-p'}, 1/p + 1/p' = 1.
std::vector<RatioReport> weighted_bmo_check(const OscillationFn& a, const Weight& w, double p,
                                            const BallFamily& F);

}  // namespace morrey
