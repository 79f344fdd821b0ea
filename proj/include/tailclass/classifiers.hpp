#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tailclass/asymptotics.hpp"
#include "tailclass/convolution.hpp"
#include "tailclass/grid.hpp"
#include "tailclass/model.hpp"
#include "tailclass/quadrature.hpp"

namespace tailclass {

enum class Verdict { Member, NonMember, Inconclusive };
enum class ClassId { D, E, L, S, A, DcapA, DcapL };

const char* to_string(Verdict v);
const char* to_string(ClassId c);

struct EvidenceItem {
    std::string name;
    double lower = 0.0;
    double upper = 0.0;
    double trend = 0.0;
};

// A decision never comes bare: Member/NonMember verdicts carry the
// windowed estimates that cleared the tolerance band, Inconclusive carries
// the diagnostics that blocked one. Finite grids cannot certify a limit,
// so uncertainty is a verdict, not an error.
struct ClassVerdict {
    ClassId class_id = ClassId::E;
    Verdict verdict = Verdict::Inconclusive;
    std::string route;
    double tolerance = 0.0;
    std::vector<EvidenceItem> evidence;
    std::string note;
    GridSpec grid;
};

enum class ERoute { Direct, HazardM1, Both };
enum class DRoute { Direct, HazardM2, Both };
enum class SRoute { SelfConvolution, Pitman, Both };

struct ClassifierConfig {
    double tol = 0.02;     // ratio-to-limit band
    double tol_m = 0.05;   // M1 positivity threshold
    double pos_floor = 1e-6;      // smallest credible positive limit
    double zero_ceiling = 1e-8;   // below this the limit counts as 0
    double drop_frac = 0.4;       // window-to-window decay => still falling
    double flat_growth = 1.5;     // window-to-window growth still "bounded"
    double unbounded_growth = 3.0;
    double rise_level = 0.5;      // a ratio this large and rising may head to 1
    double rise_frac = 1.1;
    double delta_h_min = 0.05;    // positive-decrease gate for Pitman
    std::vector<double> u_grid{1.5, 2.0, 4.0, 8.0};
    std::vector<double> kappa_grid{0.5, 1.0, 2.0};
    std::vector<double> shift_grid{1.0, 5.0, 25.0};
    std::vector<double> index_u_grid{2.0, 4.0, 8.0, 16.0, 32.0};
    QuadratureSpec quad;
};

// Extended rapidly varying tail: F*(u) < 1 for some u, equivalently
// (for bounded-increase densities) M1 > 0. Route Both demands agreement;
// the cross-check is the executable form of that equivalence.
ClassVerdict test_E(const DistributionModel& model, const GridSpec& grid, ERoute route,
                    const ClassifierConfig& cfg = {});

// Dominated variation: F_*(u) > 0, equivalently M2 < infinity.
ClassVerdict test_D(const DistributionModel& model, const GridSpec& grid, DRoute route,
                    const ClassifierConfig& cfg = {});

// Long tail: F(x - y) / F(x) -> 1 for each fixed shift y.
ClassVerdict test_L(const DistributionModel& model, const GridSpec& grid,
                    const ClassifierConfig& cfg = {});

// integral over (support, x) of exp(kappa y h(x) - H(y)) h(y) dy,
// assembled in log space as f(y) exp(kappa y h(x)). Trends to 1 for
// subexponential models whose hazard has positive decrease. Throws
// OverflowGuard when the exponent leaves the representable range (expected
// for light tails).
double pitman_integral(const DistributionModel& model, double kappa, double x,
                       const QuadratureSpec& quad);

// Subexponentiality, via the self-convolution ratio trending to 2 and/or
// the Pitman criterion trending to 1. The Pitman route is gated on an
// estimated positive decrease of the hazard (delta_h > 0); when the gate
// fails the route abstains (Inconclusive), it does not vote NonMember.
ClassVerdict test_S(const DistributionModel& model, const GridSpec& grid, SRoute route,
                    const ClassifierConfig& cfg = {});

// A = S intersect E.
ClassVerdict test_A(const DistributionModel& model, const GridSpec& grid,
                    const ClassifierConfig& cfg = {});

// D intersect A through three characterizations that must agree pairwise:
// (i) test_D and test_A, (ii) 0 < M1 <= M2 < infinity, (iii)
// 0 < F_*(u) <= F*(u) < 1 for every u in the grid.
ClassVerdict test_DcapA(const DistributionModel& model, const GridSpec& grid,
                        const ClassifierConfig& cfg = {});

enum class BoundName { HazardLower, HazardUpper };

struct BoundCheck {
    BoundName bound = BoundName::HazardLower;
    double exponent = 0.0;
    double lambda = 0.0;  // only for the upper bound
    PotterFit fit;
    double rhs = 0.0;
    LimitEstimate observed;  // x h(x) over the grid window
    bool holds = false;
    bool hypothesis_ok = true;
    std::string note;
};

// x h(x) >= (delta - 1) / C(delta) past the fitted threshold, for
// 1 < delta < delta_f.
BoundCheck check_hazard_lower_bound(const DistributionModel& model, double delta,
                              const GridSpec& grid, const ClassifierConfig& cfg = {});

// V(lambda, gamma) = (lambda^(1-gamma) - 1) / (1 - gamma), or ln lambda at
// gamma = 1.
double potter_hazard_bound_v(double lambda, double gamma);

// x h(x) <= 1 / (C'(gamma) V(lambda, gamma)) past the fitted threshold,
// for gamma > gamma_f: 1/h(x) = int_x^inf f(y)/f(x) dy >= C' x V.
BoundCheck check_hazard_upper_bound(const DistributionModel& model, double gamma, double lambda,
                              const GridSpec& grid, const ClassifierConfig& cfg = {});

struct ClosurePreconditions {
    IndexEstimate f1_idx, tail1_idx, tail2_idx;
    bool density_ok = false;   // delta_{f1} > 0
    bool ordering_ok = false;  // delta_{tail1} < delta_{tail2}
    bool witness_found = false;
    double witness_delta = 0.0;
    LimitEstimate witness_liminf;  // of x^delta F1(x)
    bool satisfied = false;
};

ClosurePreconditions check_closure_preconditions(const DistributionModel& left,
                                                     const DistributionModel& right,
                                                     const GridSpec& grid,
                                                     const ClassifierConfig& cfg = {});

struct ClosureVerdict {
    ClosurePreconditions pre;
    ClassVerdict conv_E;
    IndexEstimate conv_tail_idx;
    LimitEstimate max_sum;  // max_sum_ratio over the top windows
    ClassVerdict left_DcapA, right_DcapA;
    std::optional<ClassVerdict> conv_DcapA;  // when both inputs are members
    bool max_sum_to_one = false;
};

// Convolution-closure check: when the preconditions hold the convolution
// must test as an E member; when both inputs are DcapA members the
// convolution must be one too and the max-sum ratio must flatten at 1.
ClosureVerdict verify_convolution_closure(const DistributionModel& left,
                                  const DistributionModel& right, const GridSpec& grid,
                                  const QuadratureSpec& quad,
                                  const ClassifierConfig& cfg = {});

// Everything the classify command reports for one model.
struct Classification {
    ClassVerdict d, e, l, s, a, dcap_a;
    IndexEstimate tail_idx, density_idx, hazard_idx;
    LimitEstimate xh;
    bool xh_unbounded = false;
};

Classification classify_all(const DistributionModel& model, const GridSpec& grid,
                            const ClassifierConfig& cfg = {});

}  // namespace tailclass
