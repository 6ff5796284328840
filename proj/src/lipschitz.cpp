#include "feasops/lipschitz.hpp"

#include <cmath>

#include "feasops/rng.hpp"

namespace feasops {

namespace {

void require_beta(double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw Error("beta must lie in [0,1); the bound is undefined otherwise");
    }
}

std::string annulus_region(double beta) {
    return "H \\ B(0, " + std::to_string(1.0 - beta) + ")";
}

} // namespace

LipschitzBound sphere_reflection_bound(double beta) {
    require_beta(beta);
    return {(1.0 + beta) / (1.0 - beta), "sphere reflection", annulus_region(beta)};
}

double projection_pair_bound(const Point& x, const Point& y) {
    require_same_dim(x, y);
    const double nx = x.norm();
    const double ny = y.norm();
    if (nx == 0.0 || ny == 0.0) throw Error("projection_pair_bound: zero input");
    return std::max(1.0 / nx, 1.0 / ny);
}

LipschitzBound dr_bound(double beta) {
    require_beta(beta);
    return {1.0 / (1.0 - beta), "averaged double reflection", annulus_region(beta)};
}

double family_coefficient_sum(const FamilyParams& p) {
    const double s1 = p.s1, s2 = p.s2, s3 = p.s3;
    return (s1 + (1 - s1) * (s2 + s3)) + (1 - s1) * s2 * (1 - s3) + (1 - s1) * (1 - s2) * s3 +
           (1 - s1) * s2 * s3;
}

LipschitzBound family_bound(const FamilyParams& p, double beta) {
    require_beta(beta);
    p.validate();
    const double s1 = p.s1, s2 = p.s2, s3 = p.s3;
    const double c = s1 + (1 - s1) * (s2 + s3) + (1 - s1) * (1 - s2) * s3;
    const double kappa = 1.0 + 2.0 * (1.0 - c) * beta / (1.0 - beta);
    return {kappa, "family constant", annulus_region(beta)};
}

LipschitzBound family_composition_bound(const FamilyParams& p, double beta) {
    require_beta(beta);
    p.validate();
    const double c = p.s1 + (1 - p.s1) * p.s3;
    const double kappa = 1.0 + 2.0 * (1.0 - c) * beta / (1.0 - beta);
    return {kappa, "family constant, factor composition", annulus_region(beta)};
}

EmpiricalEstimate empirical_lipschitz(const MapFn& map, const AnnulusDomain& domain,
                                      const SamplerConfig& cfg) {
    if (cfg.count < 1) throw Error("empirical_lipschitz: needs at least one pair");
    EmpiricalEstimate est;
    est.seed = cfg.seed;

    auto consider = [&](const Point& x, const Point& y, bool tangential) {
        const double d = (x - y).norm();
        if (d < 1e-12) {
            ++est.pairs_skipped;
            return;
        }
        Point fx, fy;
        try {
            fx = map(x);
            fy = map(y);
        } catch (const Error&) {
            ++est.pairs_skipped;
            return;
        }
        ++est.pairs_tested;
        const double ratio = (fx - fy).norm() / d;
        if (tangential) est.tangential_sup = std::max(est.tangential_sup, ratio);
        if (ratio > est.sup_ratio) {
            est.sup_ratio = ratio;
            est.argmax_x = x;
            est.argmax_y = y;
        }
    };

    // Random pairs from the domain.
    std::uint64_t index = 0;
    std::size_t pairs = 0;
    Point first;
    bool have_first = false;
    std::uint64_t attempts = 0;
    while (pairs < cfg.count) {
        ++attempts;
        if (attempts > 64 * (cfg.count + 1000000)) {
            throw SamplingError("empirical_lipschitz: domain acceptance rate too low");
        }
        Point p = ball_point(domain.ball, cfg.seed, index++);
        if (p.norm() < domain.inner_radius) continue;
        if (!have_first) {
            first = std::move(p);
            have_first = true;
            continue;
        }
        consider(first, p, false);
        have_first = false;
        ++pairs;
    }

    // Tangential refinement at the inner radius, rotating in the e1-e2
    // plane; random pairs alone approach tight sphere constants too slowly.
    if (domain.inner_radius > 0.0) {
        const int dim = domain.ball.dim();
        const double rho = domain.inner_radius;
        const double eps = 1e-4;
        const double c = std::cos(eps), s = std::sin(eps);
        const std::uint64_t dirs = std::min<std::uint64_t>(1024, std::max<std::uint64_t>(cfg.count, 64));
        const std::uint64_t dir_seed = rng::splitmix64(cfg.seed ^ 0x74616e67ULL);
        for (std::uint64_t i = 0; i < dirs; ++i) {
            Point u = rng::unit_direction(dir_seed, i, dim);
            Point v = u;
            if (dim >= 2) {
                v[0] = c * u[0] - s * u[1];
                v[1] = s * u[0] + c * u[1];
            }
            Point x = rho * u;
            Point y = rho * v;
            if (!domain.ball.contains(x) || !domain.ball.contains(y)) continue;
            consider(x, y, true);
        }
    }
    return est;
}

EmpiricalEstimate exchanged_order_blowup(double lambda, const SamplerConfig& cfg, int dim) {
    const SetDescriptor sphere = SetDescriptor::unit_sphere(dim);
    const SetDescriptor line = SetDescriptor::line(lambda, dim);
    // T_{C,S}: reflect through the line first, then the sphere. Pairs whose
    // line reflections sit near the origin make the sphere reflection blow
    // up, so sample near the preimage of the origin under R_C.
    MapFn map = [&](const Point& x) { return dr_step(line, sphere, x); };
    Point center = Point::Zero(dim);
    center[1] = 2.0 * lambda;
    AnnulusDomain domain{Ball(std::move(center), 1e-3), 0.0};
    return empirical_lipschitz(map, domain, cfg);
}

} // namespace feasops
