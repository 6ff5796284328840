#pragma once

#include <iosfwd>
#include <memory>
#include <optional>

#include "feasops/operators.hpp"
#include "feasops/sets.hpp"
#include "feasops/space.hpp"

namespace feasops {

/// Finite restriction data of an L-Lipschitz map: anchors a_i with values
/// v_i satisfying ||v_i - v_j|| <= L ||a_i - a_j|| (+ slack).
struct LipschitzSample {
    std::vector<Point> anchors;
    std::vector<Point> values;
    double L = 1.0;

    std::size_t size() const { return anchors.size(); }

    /// Checks anchor distinctness (min pairwise distance > 1e-12) and the
    /// Lipschitz consistency of every pair within the given slack; throws
    /// SampleConsistencyError naming the violating pair.
    void validate(double slack = 1e-9) const;
};

/// Flat-table serialization (anchor coords, value coords, L) for fixtures.
void write_sample(std::ostream& os, const LipschitzSample& sample);
LipschitzSample read_sample(std::istream& is);

struct MinimaxSettings {
    std::size_t max_iterations = 200000;
    double feasibility_tol = 1e-6; // achieved h above this is an error
    double min_gap = 1e-11;        // level-gap refinement floor
    int stall_limit = 60;          // non-improving steps before halving the gap
};

struct MinimaxResult {
    Point point;
    double h = 0.0; // max_i (||point - c_i|| - r_i), plus the folded set term
    std::size_t iterations = 0;
};

/// Minimizes h(y) = max_i (||y - c_i|| - r_i) by subgradient descent with a
/// Polyak-type step against the best known value, warm-started at the
/// centroid of the centers. Returns the best iterate (the deepest point,
/// not merely a feasible one). With fold_in set, the distance to that
/// convex set enters the max as an extra term.
MinimaxResult solve_minimax(const std::vector<Point>& centers, const std::vector<double>& radii,
                            const MinimaxSettings& settings = {},
                            const SetDescriptor* fold_in = nullptr);

/// Pointwise Kirszbraun extension: at a query x, the value is the minimizer
/// of h(y) = max_i (||y - v_i|| - L ||x - a_i||). Consistency of the sample
/// guarantees min h <= 0, so the value satisfies every ball constraint.
/// Evaluated (query, value) pairs are appended to the sample when
/// memoization is on, which keeps repeated evaluation self-consistent.
class ExtensionMap {
public:
    explicit ExtensionMap(LipschitzSample sample, MinimaxSettings settings = {},
                          std::optional<SetDescriptor> range = std::nullopt, bool memoize = true);

    /// Throws InfeasibleExtension if the solver cannot reach
    /// h <= settings.feasibility_tol.
    Point evaluate(const Point& x);

    const LipschitzSample& sample() const { return sample_; }
    const std::optional<SetDescriptor>& range() const { return range_; }

private:
    Point solve_at(const Point& x);

    LipschitzSample sample_;
    MinimaxSettings settings_;
    std::optional<SetDescriptor> range_;
    bool memoize_ = true;
};

struct BuildSettings {
    std::size_t boundary_anchors = 0; // 0 = dimension-based default
    std::size_t annulus_anchors = 256;
    MinimaxSettings solver;
    bool memoize = true;
    /// Restrict anchors to first coordinate >= 0 and constrain the
    /// extension's range to that halfspace.
    bool halfspace_variant = false;
};

/// A map that is closed-form outside B(0, switch_radius) and a lazy
/// extension inside. Copies share the extension (and its memo).
class PiecewiseOperator {
public:
    PiecewiseOperator(double switch_radius, StepFn outside, std::shared_ptr<ExtensionMap> inner);

    Point operator()(const Point& x) const;

    double switch_radius() const { return switch_radius_; }
    const ExtensionMap& inner() const { return *inner_; }

private:
    double switch_radius_;
    StepFn outside_;
    std::shared_ptr<ExtensionMap> inner_;
};

/// The operator F: equal to T = T^{p}_{S,C} for ||x|| >= 1-beta, and a lazy
/// Kirszbraun extension inside, with L = family_bound(p, beta) and anchors
/// drawn from (region \ B(0,1-beta)) and the sphere of radius 1-beta.
/// Throws SampleConsistencyError if the anchor data refutes L.
PiecewiseOperator build_F(const SetDescriptor& C, double beta, const FamilyParams& p,
                          const SamplerConfig& cfg, const Ball& region,
                          const BuildSettings& settings = {});

/// The piecewise map F1: P_C P_S outside B(0,1-beta), Kirszbraun extension
/// of its restriction to the sphere of radius 1-beta inside, range-bounded
/// by B[x0, r]. Requires r >= 2 and x0 in S ∩ C (within 1e-10).
PiecewiseOperator build_F1(const SetDescriptor& C, double beta, const Point& x0, double r,
                           const SamplerConfig& cfg, const BuildSettings& settings = {});

} // namespace feasops
