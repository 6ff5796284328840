#include <doctest.h>

#include <cmath>
#include <sstream>

#include "feasops/operators.hpp"

using namespace feasops;

namespace {
const SetDescriptor kSphere2 = SetDescriptor::unit_sphere(2);
const SetDescriptor kLine0 = SetDescriptor::line(0.0, 2);
const SetDescriptor kLineHalf = SetDescriptor::line(0.5, 2);
} // namespace

TEST_CASE("dr_step composition") {
    CHECK((dr_step(kSphere2, kLine0, point({1, 0})) - point({1, 0})).norm() <= 1e-15);
    CHECK((dr_step(kSphere2, kLine0, point({3, 4})) - point({0.6, 3.2})).norm() <= 1e-14);
    CHECK_THROWS_AS(dr_step(kSphere2, kLine0, point({0, 0})), MultiValuedProjection);
    // The failing stage is named.
    try {
        dr_step(kSphere2, kLine0, point({0, 0}));
    } catch (const MultiValuedProjection& e) {
        CHECK(std::string(e.what()).find("inner") != std::string::npos);
    }
}

TEST_CASE("family_step presets and shortcuts") {
    const FamilyParams dr = FamilyParams::douglas_rachford();
    const FamilyParams vn = FamilyParams::von_neumann();
    CHECK((family_step(dr, kSphere2, kLine0, point({3, 4})) - point({0.6, 3.2})).norm() <= 1e-14);
    CHECK((family_step(vn, kSphere2, kLine0, point({3, 4})) - point({0.6, 0})).norm() <= 1e-14);
    // s1 = 1 is the identity, even where the sphere projection is undefined.
    CHECK((family_step({1.0, 0.3, 0.7}, kSphere2, kLine0, point({0, 0})) - point({0, 0})).norm() ==
          0.0);

    // Preset equivalence over a sample cloud, to 1e-14.
    auto pts = sample_ball(Ball(Point::Zero(2), 4.0), {3, 10000});
    double worst_dr = 0.0, worst_vn = 0.0;
    for (const Point& x : pts) {
        if (x.norm() < 1e-6) continue;
        worst_dr = std::max(worst_dr,
                            (family_step(dr, kSphere2, kLineHalf, x) -
                             dr_step(kSphere2, kLineHalf, x)).norm());
        worst_vn = std::max(worst_vn,
                            (family_step(vn, kSphere2, kLineHalf, x) - vn_step(kLineHalf, x)).norm());
    }
    CHECK(worst_dr <= 1e-14);
    CHECK(worst_vn <= 1e-14);
}

TEST_CASE("vn_step") {
    CHECK((vn_step(kLine0, point({3, 4})) - point({0.6, 0})).norm() <= 1e-15);
    const Point x0 = point({std::sqrt(0.75), 0.5});
    CHECK((vn_step(kLineHalf, x0) - x0).norm() <= 1e-15);
    CHECK_THROWS_AS(vn_step(kLine0, point({0, 0})), MultiValuedProjection);
}

TEST_CASE("iterate: sphere/line dynamics") {
    StepFn step0 = [](const Point& x) { return dr_step(kSphere2, kLine0, x); };
    auto trace = iterate(step0, point({3, 4}), 5000, 1e-10);
    CHECK(trace.stop_reason == StopReason::Converged);
    CHECK((trace.points.back() - point({1, 0})).norm() <= 1e-6);

    StepFn step_half = [](const Point& x) { return dr_step(kSphere2, kLineHalf, x); };
    auto trace_half = iterate(step_half, point({3, 4}), 5000, 1e-10);
    CHECK(trace_half.stop_reason == StopReason::Converged);
    CHECK((trace_half.points.back() - point({std::sqrt(0.75), 0.5})).norm() <= 1e-6);

    const SetDescriptor line_far = SetDescriptor::line(1.5, 2);
    StepFn step_far = [&](const Point& x) { return dr_step(kSphere2, line_far, x); };
    auto trace_far = iterate(step_far, point({3, 4}), 20000, 1e-6);
    CHECK(trace_far.stop_reason == StopReason::MaxIter);

    // Replay: consecutive points satisfy the step map.
    for (std::size_t k = 0; k + 1 < trace_half.points.size(); ++k) {
        CHECK((step_half(trace_half.points[k]) - trace_half.points[k + 1]).norm() <= 1e-12);
    }
}

TEST_CASE("iterate: trace ends at an undefined projection") {
    // From (0,2) with lambda = 0.5 the orbit hits the origin exactly.
    StepFn step = [](const Point& x) { return dr_step(kSphere2, kLineHalf, x); };
    auto trace = iterate(step, point({0, 2}), 100, 0.0);
    CHECK(trace.stop_reason == StopReason::ProjectionUndefined);
    CHECK(trace.points.back().norm() == 0.0);
}

TEST_CASE("trace CSV layout") {
    StepFn step = [](const Point& x) { return dr_step(kSphere2, kLine0, x); };
    auto trace = iterate(step, point({3, 4}), 3, 0.0);
    std::ostringstream os;
    write_trace_csv(os, trace);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,x0,x1,step_norm");
    std::getline(is, line);
    CHECK(line.substr(0, 4) == "0,3,");
}

TEST_CASE("is_fixed_point") {
    CHECK(is_fixed_point(kSphere2, kLineHalf, point({std::sqrt(0.75), 0.5}), 1e-9));
    CHECK_FALSE(is_fixed_point(kSphere2, kLineHalf, point({3, 4}), 1e-9));
    // P_S maps (2,0) into S ∩ L_0, so the membership test reports true...
    CHECK(is_fixed_point(kSphere2, kLine0, point({2, 0}), 1e-9));
    // ...yet (2,0) is not actually fixed: T(2,0) = (1,0). The membership
    // characterization is one-sided off the sphere.
    CHECK((dr_step(kSphere2, kLine0, point({2, 0})) - point({1, 0})).norm() <= 1e-15);
}

TEST_CASE("sign_class") {
    CHECK(sign_class(point({3, 4})) == Sign::Plus);
    CHECK(sign_class(point({0, 7})) == Sign::Zero);
    CHECK(sign_class(point({-1e-3, 0}), 1e-6) == Sign::Minus);
    CHECK(sign_class(point({1e-9, 0}), 1e-6) == Sign::Zero);
}

TEST_CASE("sign invariance across lambda") {
    for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0, 1.5}) {
        const auto report = check_sign_invariance(lambda, {2024, 2000});
        CHECK(report.samples == 2000);
        CHECK(report.violations == 0);
        CHECK(report.max_zero_drift <= 1e-12);
    }
}

TEST_CASE("sign invariance examples") {
    // (0,2), lambda = 0: the image's first coordinate is exactly zero.
    const Point tx = dr_step(kSphere2, kLine0, point({0, 2}));
    CHECK(tx[0] == 0.0);
    // (3,4), lambda = 0 stays Plus.
    CHECK(sign_class(dr_step(kSphere2, kLine0, point({3, 4}))) == Sign::Plus);
}
