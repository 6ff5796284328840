#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "feasops/sets.hpp"
#include "feasops/space.hpp"

namespace feasops {

/// Parameters of the operator family
///   T^{s1,s2,s3}_{A,B} = s1 I + (1-s1)(s2 I + (1-s2) R_B)(s3 I + (1-s3) R_A).
struct FamilyParams {
    double s1 = 0.5;
    double s2 = 0.0;
    double s3 = 0.0;

    /// (1/2, 0, 0): the averaged double reflection.
    static FamilyParams douglas_rachford() { return {0.5, 0.0, 0.0}; }
    /// (0, 1/2, 1/2): composition of the two projections.
    static FamilyParams von_neumann() { return {0.0, 0.5, 0.5}; }

    void validate() const;
    bool operator==(const FamilyParams&) const = default;
};

using StepFn = std::function<Point(const Point&)>;

/// (x + R_B(R_A(x))) / 2.
Point dr_step(const SetDescriptor& A, const SetDescriptor& B, const Point& x);

/// Exact evaluation of the three-parameter composition. Inner and outer
/// reflections are skipped when their coefficient vanishes, so e.g. s1 = 1
/// is the identity everywhere, including points where R_A is undefined.
Point family_step(const FamilyParams& p, const SetDescriptor& A, const SetDescriptor& B,
                  const Point& x);

/// project(C, project(unit sphere, x)).
Point vn_step(const SetDescriptor& C, const Point& x);

enum class StopReason { MaxIter, Converged, ProjectionUndefined };

struct IterationTrace {
    std::vector<Point> points; // x0, x1, ...
    StopReason stop_reason = StopReason::MaxIter;
    double conv_tol = 0.0;
};

/// Applies step repeatedly from x0; stops after max_n steps or when
/// ||x_{k+1} - x_k|| <= conv_tol. A projection failure ends the trace with
/// ProjectionUndefined and the partial trace is returned.
IterationTrace iterate(const StepFn& step, Point x0, int max_n, double conv_tol);

/// One row per iterate: n, coordinates..., forward step norm (0 on the
/// final row).
void write_trace_csv(std::ostream& os, const IterationTrace& trace);

/// True iff project(A, x) lies within tol of both A and B.
bool is_fixed_point(const SetDescriptor& A, const SetDescriptor& B, const Point& x, double tol);

enum class Sign { Plus, Minus, Zero };

/// Classification by the first coordinate with a zero band of width tol.
Sign sign_class(const Point& x, double tol = 0.0);

struct SignInvarianceReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    std::vector<std::pair<Point, Point>> violating_pairs; // (x, Tx), capped
    double max_zero_drift = 0.0; // max |<Tx, e1>| over exact-zero starts
    std::uint64_t seed = 0;
};

/// Samples the region B[0,5] \ B(0, 0.01) and checks that T_{S,L_lambda}
/// preserves the sign class of every sample; also drives exact-zero starts
/// and records how far their image's first coordinate drifts from 0.
SignInvarianceReport check_sign_invariance(double lambda, const SamplerConfig& cfg, int dim = 2);

} // namespace feasops
