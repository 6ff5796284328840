#pragma once

#include <optional>
#include <string>

#include "feasops/kirszbraun.hpp"
#include "feasops/lipschitz.hpp"
#include "feasops/operators.hpp"

namespace feasops {

/// Parameters of a smoothing run. theta defaults to x0, which keeps the
/// intersection point fixed under the smoothed operator.
struct SmoothingPlan {
    double beta = 0.0;
    double alpha = 1.0;
    double r = 0.0;
    Point x0;
    std::optional<Point> theta;
    FamilyParams family = FamilyParams::douglas_rachford();

    const Point& anchor() const { return theta ? *theta : x0; }
};

enum class PipelineKind { DouglasRachford, Family, VonNeumann };

/// Empty iff all preconditions of the selected pipeline hold; each entry
/// names the violated inequality with both sides' values.
std::vector<std::string> validate_plan(const SmoothingPlan& plan, PipelineKind kind,
                                       const SetDescriptor& C);

/// G(x) = (1-gamma) F(x) + gamma theta with gamma = 1 - alpha/L, so G has
/// Lipschitz constant (1-gamma) L = alpha. Errors if alpha > L.
StepFn smooth(StepFn F, double L, double alpha, Point theta);

struct DecayRow {
    int n = 0;
    double observed = 0.0;
    double bound = 0.0;
};

struct ErgodicReport {
    double approx_sup = 0.0;
    double approx_bound = 0.0;
    double approx_slack = 1e-6;
    std::vector<DecayRow> decay;
    double decay_slack = 1e-6;
    bool approx_pass = false;
    bool decay_pass = false;
    bool pass = false;

    double gamma = 0.0;
    double lipschitz_bound = 0.0;
    double fixed_point_drift = 0.0;    // ||G(x0) - x0||
    double dist_check_max = 0.0;       // sup ||T x - T x0|| on samples (<= 2 expected)
    std::size_t region_samples = 0;
    std::size_t decay_pairs = 0;
    std::size_t inclusion_samples = 0;
    std::size_t inclusion_violations = 0;
    int n_max = 0;
    std::uint64_t seed = 0;
    std::string notes;
};

struct PipelineSamples {
    std::size_t region_samples = 10000; // approximation sup and inclusion check
    std::size_t decay_pairs = 200;
    int n_max = 60;
};

/// Full run for T = T^{family}_{S,C}: builds F, checks F(B[x0,r]) stays in
/// the ball on samples, smooths with L = family_bound(family, beta), then
/// measures sup ||Gx - Tx|| over B[x0,r] \ B(0,1-beta) against
/// 2r(1 - alpha/L) and the pair decay against 2 r alpha^n.
ErgodicReport run_pipeline_family(const SetDescriptor& C, const SmoothingPlan& plan,
                                  const SamplerConfig& cfg, const PipelineSamples& samples = {},
                                  const BuildSettings& build = {});

/// run_pipeline_family with the (1/2, 0, 0) preset.
ErgodicReport run_pipeline_dr(const SetDescriptor& C, const SmoothingPlan& plan,
                              const SamplerConfig& cfg, const PipelineSamples& samples = {},
                              const BuildSettings& build = {});

/// T = P_C P_S with the piecewise extension F1; the approximation sup runs
/// over all of B[x0, r] (the origin excepted), bounds 2r(1-alpha(1-beta))
/// and 2 r alpha^n.
ErgodicReport run_pipeline_vn(const SetDescriptor& C, const SmoothingPlan& plan,
                              const SamplerConfig& cfg, const PipelineSamples& samples = {},
                              const BuildSettings& build = {});

/// Iterates G on sampled pairs of the region and records, per n, the sup
/// of ||G^n x - G^n y|| next to the bound 2 r alpha^n.
std::vector<DecayRow> verify_decay(const StepFn& G, const Ball& region, double alpha, double r,
                                   int n_max, const SamplerConfig& cfg, std::size_t pairs = 200);

} // namespace feasops
