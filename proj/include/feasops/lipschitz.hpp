#pragma once

#include <cstdint>
#include <string>

#include "feasops/operators.hpp"
#include "feasops/space.hpp"

namespace feasops {

struct LipschitzBound {
    double value = 0.0;
    std::string provenance; // which closed form produced it
    std::string region;     // domain it applies to
};

/// (1+beta)/(1-beta): sphere reflection on H \ B(0, 1-beta).
LipschitzBound sphere_reflection_bound(double beta);

/// max{1/||x||, 1/||y||}: per-pair constant for the sphere projection.
double projection_pair_bound(const Point& x, const Point& y);

/// 1/(1-beta): the averaged double reflection T_{S,C}, C convex, on
/// H \ B(0, 1-beta).
LipschitzBound dr_bound(double beta);

/// The family constant
///   kappa = (1 + beta - 2(s1 + (1-s1)(s2+s3) + (1-s1)(1-s2)s3) beta) / (1-beta),
/// computed as 1 + 2(1-c)beta/(1-beta) so the (1/2, 0, 0) preset equals
/// dr_bound(beta) exactly. Its certification status is measured, not
/// assumed: see family_composition_bound and the certification tests.
LipschitzBound family_bound(const FamilyParams& p, double beta);

/// Sum of the four expansion coefficients associated with family_bound's
/// closed form. Reported alongside the bound; a correct expansion would
/// sum to 1, but this one does only on a thin parameter slice (0.5 at the
/// double-reflection preset, 1.75 at the projection preset).
double family_coefficient_sum(const FamilyParams& p);

/// Independent route: bound the two factors of the composition and
/// combine, giving (1 + beta - 2(s1 + (1-s1)s3) beta) / (1-beta). Agrees
/// with family_bound when s2 = s3 = 0; never smaller.
LipschitzBound family_composition_bound(const FamilyParams& p, double beta);

/// Sampling region for the empirical estimator: points of `ball` with
/// norm >= inner_radius. inner_radius 0 means the whole ball. When
/// inner_radius > 0 the estimator adds a tangential refinement pass:
/// pairs (rho u, rho Rot(eps) u) at rho = inner_radius, eps = 1e-4.
struct AnnulusDomain {
    Ball ball;
    double inner_radius = 0.0;
};

using MapFn = std::function<Point(const Point&)>;

struct EmpiricalEstimate {
    double sup_ratio = 0.0;
    Point argmax_x, argmax_y;
    std::size_t pairs_tested = 0;
    std::size_t pairs_skipped = 0; // degenerate or map failure
    double tangential_sup = 0.0;   // sup over the refinement pass only
    std::uint64_t seed = 0;
};

/// sup over sampled pairs of ||f(x)-f(y)|| / ||x-y||. Pairs closer than
/// 1e-12 are skipped; map failures skip the pair and are counted.
EmpiricalEstimate empirical_lipschitz(const MapFn& map, const AnnulusDomain& domain,
                                      const SamplerConfig& cfg);

/// Exhibits the blow-up of T_{C,S} (sets exchanged) for C = L_lambda by
/// sampling pairs near the origin, where R_C lands arbitrarily close to 0.
/// Demonstration only; the returned ratio is not a bound.
EmpiricalEstimate exchanged_order_blowup(double lambda, const SamplerConfig& cfg, int dim = 2);

} // namespace feasops
