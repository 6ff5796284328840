#include "feasops/operators.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "feasops/rng.hpp"

namespace feasops {

void FamilyParams::validate() const {
    for (double s : {s1, s2, s3}) {
        if (!(s >= 0.0 && s <= 1.0)) throw Error("family parameters must lie in [0,1]");
    }
}

Point dr_step(const SetDescriptor& A, const SetDescriptor& B, const Point& x) {
    Point ra;
    try {
        ra = reflect(A, x);
    } catch (const MultiValuedProjection& e) {
        throw MultiValuedProjection(std::string("dr_step, inner reflection: ") + e.what());
    }
    Point rb;
    try {
        rb = reflect(B, ra);
    } catch (const MultiValuedProjection& e) {
        throw MultiValuedProjection(std::string("dr_step, outer reflection: ") + e.what());
    }
    return (x + rb) / 2.0;
}

Point family_step(const FamilyParams& p, const SetDescriptor& A, const SetDescriptor& B,
                  const Point& x) {
    p.validate();
    if (p.s1 == 1.0) return x;
    Point v;
    if (p.s3 == 1.0) {
        v = x;
    } else {
        Point ra;
        try {
            ra = reflect(A, x);
        } catch (const MultiValuedProjection& e) {
            throw MultiValuedProjection(std::string("family_step, inner reflection: ") + e.what());
        }
        v = (p.s3 == 0.0) ? std::move(ra) : Point(p.s3 * x + (1.0 - p.s3) * ra);
    }
    Point w;
    if (p.s2 == 1.0) {
        w = v;
    } else {
        Point rb;
        try {
            rb = reflect(B, v);
        } catch (const MultiValuedProjection& e) {
            throw MultiValuedProjection(std::string("family_step, outer reflection: ") + e.what());
        }
        w = (p.s2 == 0.0) ? std::move(rb) : Point(p.s2 * v + (1.0 - p.s2) * rb);
    }
    if (p.s1 == 0.0) return w;
    return p.s1 * x + (1.0 - p.s1) * w;
}

Point vn_step(const SetDescriptor& C, const Point& x) {
    const SetDescriptor sphere = SetDescriptor::unit_sphere(static_cast<int>(x.size()));
    return project(C, project(sphere, x));
}

IterationTrace iterate(const StepFn& step, Point x0, int max_n, double conv_tol) {
    IterationTrace trace;
    trace.conv_tol = conv_tol;
    trace.points.push_back(std::move(x0));
    trace.stop_reason = StopReason::MaxIter;
    for (int k = 0; k < max_n; ++k) {
        Point next;
        try {
            next = step(trace.points.back());
        } catch (const MultiValuedProjection&) {
            trace.stop_reason = StopReason::ProjectionUndefined;
            return trace;
        }
        const double diff = (next - trace.points.back()).norm();
        trace.points.push_back(std::move(next));
        if (diff <= conv_tol) {
            trace.stop_reason = StopReason::Converged;
            return trace;
        }
    }
    return trace;
}

void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
    const int dim = trace.points.empty() ? 0 : static_cast<int>(trace.points.front().size());
    os << "n";
    for (int j = 0; j < dim; ++j) os << ",x" << j;
    os << ",step_norm\n";
    char buf[40];
    for (std::size_t n = 0; n < trace.points.size(); ++n) {
        os << n;
        for (int j = 0; j < dim; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", trace.points[n][j]);
            os << ',' << buf;
        }
        const double step_norm = (n + 1 < trace.points.size())
                                     ? (trace.points[n + 1] - trace.points[n]).norm()
                                     : 0.0;
        std::snprintf(buf, sizeof buf, "%.17g", step_norm);
        os << ',' << buf << '\n';
    }
}

bool is_fixed_point(const SetDescriptor& A, const SetDescriptor& B, const Point& x, double tol) {
    const Point pa = project(A, x);
    return contains(A, pa, tol) && contains(B, pa, tol);
}

Sign sign_class(const Point& x, double tol) {
    if (x.size() < 1) throw Error("sign_class: empty point");
    if (x[0] > tol) return Sign::Plus;
    if (x[0] < -tol) return Sign::Minus;
    return Sign::Zero;
}

SignInvarianceReport check_sign_invariance(double lambda, const SamplerConfig& cfg, int dim) {
    const SetDescriptor sphere = SetDescriptor::unit_sphere(dim);
    const SetDescriptor line = SetDescriptor::line(lambda, dim);
    SignInvarianceReport report;
    report.seed = cfg.seed;

    const Ball region(Point::Zero(dim), 5.0);
    std::uint64_t index = 0;
    while (report.samples < cfg.count) {
        Point x = ball_point(region, cfg.seed, index++);
        if (x.norm() < 0.01) continue;
        ++report.samples;
        const Point tx = dr_step(sphere, line, x);
        if (sign_class(tx) != sign_class(x)) {
            ++report.violations;
            if (report.violating_pairs.size() < 16) report.violating_pairs.emplace_back(x, tx);
        }
    }

    // Exact-zero starts: first coordinate identically zero.
    for (std::uint64_t i = 0; i < 32; ++i) {
        Point x = ball_point(region, rng::splitmix64(cfg.seed ^ 0x5a5a5a5aULL), i);
        x[0] = 0.0;
        if (x.norm() < 1e-6) continue;
        const Point tx = dr_step(sphere, line, x);
        report.max_zero_drift = std::max(report.max_zero_drift, std::abs(tx[0]));
    }
    return report;
}

} // namespace feasops
