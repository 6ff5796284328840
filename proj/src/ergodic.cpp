#include "feasops/ergodic.hpp"

#include <cmath>
#include <cstdio>

#include "feasops/rng.hpp"

namespace feasops {

namespace {

std::string violation(const char* inequality, double lhs, const char* rel, double rhs) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: %.17g %s %.17g", inequality, lhs, rel, rhs);
    return buf;
}

double pipeline_L(const SmoothingPlan& plan, PipelineKind kind) {
    switch (kind) {
    case PipelineKind::DouglasRachford:
        return dr_bound(plan.beta).value;
    case PipelineKind::Family:
        return family_bound(plan.family, plan.beta).value;
    case PipelineKind::VonNeumann:
        return dr_bound(plan.beta).value;
    }
    return 0.0;
}

/// Sampler for the approximation sup: mostly uniform over the region, with
/// slices biased to the switch radius and the region boundary where the
/// extrema live. Points below min_norm are rejected.
std::vector<Point> region_samples(const Ball& region, double min_norm, double switch_radius,
                                  std::size_t count, std::uint64_t seed) {
    const int dim = region.dim();
    std::vector<Point> out;
    out.reserve(count);
    std::uint64_t index = 0;
    std::uint64_t attempts = 0;
    const std::uint64_t bseed = rng::splitmix64(seed ^ 0xb1a5);
    while (out.size() < count && attempts < 200 * (count + 1000)) {
        ++attempts;
        Point x;
        switch (out.size() % 5) {
        case 0:
        case 1:
        case 2:
            x = ball_point(region, seed, index++);
            break;
        case 3: { // hug the switch radius from outside
            const Point u = rng::unit_direction(bseed, index++, dim);
            x = (switch_radius * (1.0 + 0.05 * rng::uniform01(bseed ^ 1, index, 0))) * u;
            break;
        }
        default: { // hug the region boundary
            const Point u = rng::unit_direction(bseed ^ 2, index++, dim);
            x = region.center + (region.radius * (0.98 + 0.02 * rng::uniform01(bseed ^ 3, index, 0))) * u;
            break;
        }
        }
        if (!region.contains(x)) continue;
        if (x.norm() < min_norm) continue;
        out.push_back(std::move(x));
    }
    return out;
}

ErgodicReport run_pipeline(const SetDescriptor& C, const SmoothingPlan& plan, PipelineKind kind,
                           const SamplerConfig& cfg, const PipelineSamples& samples,
                           const BuildSettings& build) {
    const auto violations = validate_plan(plan, kind, C);
    if (!violations.empty()) {
        throw PlanValidationError("smoothing plan rejected", violations);
    }
    const int dim = static_cast<int>(plan.x0.size());
    const SetDescriptor sphere = SetDescriptor::unit_sphere(dim);
    const double L = pipeline_L(plan, kind);
    const Ball region(plan.x0, plan.r);
    const double rho = 1.0 - plan.beta;

    ErgodicReport report;
    report.seed = cfg.seed;
    report.lipschitz_bound = L;
    report.n_max = samples.n_max;
    report.approx_slack = 1e-3; // extension slack budget for pipeline-built maps
    report.decay_slack = 1e-6;

    // The operator under study and its Lipschitz surrogate F.
    StepFn T;
    PiecewiseOperator F = [&]() {
        if (kind == PipelineKind::VonNeumann) {
            T = [C](const Point& x) { return vn_step(C, x); };
            return build_F1(C, plan.beta, plan.x0, plan.r, cfg, build);
        }
        const FamilyParams p =
            kind == PipelineKind::DouglasRachford ? FamilyParams::douglas_rachford() : plan.family;
        T = [p, sphere, C](const Point& x) { return family_step(p, sphere, C, x); };
        return build_F(C, plan.beta, p, cfg, region, build);
    }();
    StepFn F_fn = [F](const Point& x) { return F(x); };

    // Inclusion: F(B[x0,r]) within the ball (with extension slack).
    {
        const SamplerConfig inc{rng::splitmix64(cfg.seed ^ 0x1c), samples.region_samples};
        report.inclusion_samples = inc.count;
        for (const Point& x : sample_ball(region, inc)) {
            const Point fx = F_fn(x);
            if ((fx - plan.x0).norm() > plan.r + 1e-6) ++report.inclusion_violations;
        }
    }

    StepFn G = smooth(F_fn, L, plan.alpha, plan.anchor());
    report.gamma = 1.0 - plan.alpha / L;
    report.fixed_point_drift = (G(plan.x0) - plan.x0).norm();

    // Approximation sup. The family pipelines exclude B(0, 1-beta); the
    // von Neumann pipeline measures over the whole ball.
    const double min_norm = kind == PipelineKind::VonNeumann ? 0.0 : rho;
    report.approx_bound = 2.0 * plan.r * (1.0 - plan.alpha / L);
    const auto approx_points = region_samples(region, min_norm, rho, samples.region_samples,
                                              rng::splitmix64(cfg.seed ^ 0xa9));
    report.region_samples = approx_points.size();
    for (const Point& x : approx_points) {
        if (x.norm() == 0.0) continue;
        report.approx_sup = std::max(report.approx_sup, (G(x) - T(x)).norm());
        if (kind == PipelineKind::VonNeumann) {
            report.dist_check_max =
                std::max(report.dist_check_max, (T(x) - T(plan.x0)).norm());
        }
    }
    report.approx_pass = report.approx_sup <= report.approx_bound + report.approx_slack;

    // Weak ergodic decay over sampled pairs.
    report.decay = verify_decay(G, region, plan.alpha, plan.r, samples.n_max,
                                SamplerConfig{rng::splitmix64(cfg.seed ^ 0xdeca), 1},
                                samples.decay_pairs);
    report.decay_pairs = samples.decay_pairs;
    report.decay_pass = true;
    for (const DecayRow& row : report.decay) {
        if (row.observed > row.bound + report.decay_slack) report.decay_pass = false;
    }
    report.pass = report.approx_pass && report.decay_pass;
    return report;
}

} // namespace

std::vector<std::string> validate_plan(const SmoothingPlan& plan, PipelineKind kind,
                                       const SetDescriptor& C) {
    std::vector<std::string> out;
    if (!(plan.beta >= 0.0 && plan.beta < 1.0)) {
        out.push_back(violation("beta in [0,1)", plan.beta, "outside", 1.0));
        return out; // the remaining inequalities are meaningless without beta
    }
    const double L = pipeline_L(plan, kind);
    if (!(plan.alpha > 0.0)) out.push_back(violation("alpha > 0", plan.alpha, "<=", 0.0));
    switch (kind) {
    case PipelineKind::DouglasRachford:
        if (plan.r < 2.0 / (1.0 - plan.beta)) {
            out.push_back(violation("r >= 2/(1-beta)", plan.r, "<", 2.0 / (1.0 - plan.beta)));
        }
        if (plan.alpha > L) {
            out.push_back(violation("alpha <= 1/(1-beta)", plan.alpha, ">", L));
        }
        break;
    case PipelineKind::Family:
        if (plan.r < 2.0 * L) out.push_back(violation("r >= 2*kappa", plan.r, "<", 2.0 * L));
        if (plan.alpha > L) out.push_back(violation("alpha <= kappa", plan.alpha, ">", L));
        break;
    case PipelineKind::VonNeumann:
        if (plan.r < 2.0) out.push_back(violation("r >= 2", plan.r, "<", 2.0));
        if (plan.alpha > L) {
            out.push_back(violation("alpha <= 1/(1-beta)", plan.alpha, ">", L));
        }
        break;
    }
    if (plan.x0.size() == 0) {
        out.push_back("x0 is empty");
        return out;
    }
    const double sphere_residual = std::abs(plan.x0.norm() - 1.0);
    if (sphere_residual > 1e-10) {
        out.push_back(violation("x0 on the unit sphere", sphere_residual, ">", 1e-10));
    }
    const double set_residual = distance(C, plan.x0);
    if (set_residual > 1e-10) {
        out.push_back(violation("x0 in C", set_residual, ">", 1e-10));
    }
    if (plan.theta && (*plan.theta - plan.x0).norm() > plan.r) {
        out.push_back(violation("theta in B[x0,r]", (*plan.theta - plan.x0).norm(), ">", plan.r));
    }
    return out;
}

StepFn smooth(StepFn F, double L, double alpha, Point theta) {
    if (!(L > 0.0)) throw Error("smooth: L must be positive");
    if (alpha > L) throw Error("smooth: alpha > L would make gamma negative");
    const double gamma = 1.0 - alpha / L;
    return [F = std::move(F), gamma, theta = std::move(theta)](const Point& x) {
        return Point((1.0 - gamma) * F(x) + gamma * theta);
    };
}

std::vector<DecayRow> verify_decay(const StepFn& G, const Ball& region, double alpha, double r,
                                   int n_max, const SamplerConfig& cfg, std::size_t pairs) {
    if (!(alpha > 0.0)) throw Error("verify_decay: alpha must be positive");
    std::vector<Point> xs = sample_ball(region, SamplerConfig{cfg.seed, 2 * pairs});
    std::vector<DecayRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    double bound = 2.0 * r;
    for (int n = 1; n <= n_max; ++n) {
        bound *= alpha;
        for (Point& x : xs) x = G(x);
        double sup = 0.0;
        for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
            sup = std::max(sup, (xs[i] - xs[i + 1]).norm());
        }
        rows.push_back({n, sup, bound});
    }
    return rows;
}

ErgodicReport run_pipeline_family(const SetDescriptor& C, const SmoothingPlan& plan,
                                  const SamplerConfig& cfg, const PipelineSamples& samples,
                                  const BuildSettings& build) {
    return run_pipeline(C, plan, PipelineKind::Family, cfg, samples, build);
}

ErgodicReport run_pipeline_dr(const SetDescriptor& C, const SmoothingPlan& plan,
                              const SamplerConfig& cfg, const PipelineSamples& samples,
                              const BuildSettings& build) {
    SmoothingPlan dr_plan = plan;
    dr_plan.family = FamilyParams::douglas_rachford();
    // Validate against the double-reflection inequalities for their error
    // messages, then run the shared family path, which is bit-identical
    // for the (1/2, 0, 0) preset.
    const auto violations = validate_plan(dr_plan, PipelineKind::DouglasRachford, C);
    if (!violations.empty()) throw PlanValidationError("smoothing plan rejected", violations);
    return run_pipeline(C, dr_plan, PipelineKind::Family, cfg, samples, build);
}

ErgodicReport run_pipeline_vn(const SetDescriptor& C, const SmoothingPlan& plan,
                              const SamplerConfig& cfg, const PipelineSamples& samples,
                              const BuildSettings& build) {
    return run_pipeline(C, plan, PipelineKind::VonNeumann, cfg, samples, build);
}

} // namespace feasops
