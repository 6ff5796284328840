#include "feasops/space.hpp"

#include <cmath>
#include <string>

#include "feasops/rng.hpp"

namespace feasops {

Point point(std::initializer_list<double> coords) {
    Point p(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (double c : coords) p[i++] = c;
    return p;
}

void require_same_dim(const Point& x, const Point& y) {
    if (x.size() != y.size()) {
        throw DimensionMismatch("dimension mismatch: " + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()));
    }
}

void require_finite(const Point& x, const char* what) {
    if (!x.allFinite()) throw Error(std::string(what) + " has non-finite coordinates");
}

double inner(const Point& x, const Point& y) {
    require_same_dim(x, y);
    return x.dot(y);
}

double norm(const Point& x) { return x.norm(); }

double diam_estimate(std::span<const Point> points) {
    if (points.empty()) throw Error("diam_estimate: empty point list");
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            best = std::max(best, (points[i] - points[j]).norm());
        }
    }
    return best;
}

Ball::Ball(Point c, double r, bool is_closed) : center(std::move(c)), radius(r), closed(is_closed) {
    if (!(radius >= 0.0)) throw Error("ball radius must be nonnegative");
    require_finite(center, "ball center");
}

bool Ball::contains(const Point& x) const {
    require_same_dim(x, center);
    const double d = (x - center).norm();
    return closed ? d <= radius : d < radius;
}

Point ball_point(const Ball& ball, std::uint64_t seed, std::uint64_t index) {
    const int n = ball.dim();
    Eigen::VectorXd dir = rng::unit_direction(seed, index, n);
    const double u = rng::uniform01(seed, index, 2 * static_cast<std::uint64_t>(n));
    const double r = ball.radius * std::pow(u, 1.0 / static_cast<double>(n));
    return ball.center + r * dir;
}

std::vector<Point> sample_ball(const Ball& ball, const SamplerConfig& cfg) {
    if (!(ball.radius > 0.0)) throw Error("sample_ball: radius must be positive");
    std::vector<Point> out;
    out.reserve(cfg.count);
    for (std::uint64_t i = 0; i < cfg.count; ++i) out.push_back(ball_point(ball, cfg.seed, i));
    return out;
}

std::vector<Point> sample_annulus(const Ball& outer, double inner_radius,
                                  const SamplerConfig& cfg) {
    if (!(outer.radius > 0.0)) throw Error("sample_annulus: outer radius must be positive");
    if (inner_radius < 0.0) throw Error("sample_annulus: inner radius must be nonnegative");
    // sup of the norm over the outer ball; below inner_radius the region is empty.
    if (outer.center.norm() + outer.radius < inner_radius) {
        throw SamplingError("sample_annulus: region is empty");
    }
    std::vector<Point> out;
    out.reserve(cfg.count);
    std::uint64_t attempts = 0;
    for (std::uint64_t index = 0; out.size() < cfg.count; ++index) {
        ++attempts;
        if (attempts >= 1000000 && static_cast<double>(out.size()) <
                                       1e-6 * static_cast<double>(attempts)) {
            throw SamplingError("sample_annulus: acceptance rate below 1e-6");
        }
        Point p = ball_point(outer, cfg.seed, index);
        if (p.norm() >= inner_radius) out.push_back(std::move(p));
    }
    return out;
}

} // namespace feasops
