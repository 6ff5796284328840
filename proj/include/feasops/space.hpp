#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "feasops/errors.hpp"

namespace feasops {

/// A point of the ambient space R^n. Dimension is the vector's size.
using Point = Eigen::VectorXd;

/// Convenience constructor, mostly for tests and configs.
Point point(std::initializer_list<double> coords);

/// Throws DimensionMismatch unless x and y live in the same R^n.
void require_same_dim(const Point& x, const Point& y);

/// Throws Error if any coordinate is NaN or infinite.
void require_finite(const Point& x, const char* what = "point");

/// Euclidean inner product. Errors on dimension mismatch.
double inner(const Point& x, const Point& y);

/// Euclidean norm.
double norm(const Point& x);

/// Max pairwise distance over a finite point set; a lower bound on the
/// diameter of any set containing them. Errors on an empty list.
double diam_estimate(std::span<const Point> points);

struct Ball {
    Point center;
    double radius = 0.0;
    bool closed = true;

    Ball() = default;
    Ball(Point c, double r, bool is_closed = true);

    int dim() const { return static_cast<int>(center.size()); }
    bool contains(const Point& x) const;
};

/// Identical seed + count produce the identical sample sequence,
/// independent of evaluation order.
struct SamplerConfig {
    std::uint64_t seed = 1;
    std::size_t count = 1;
};

/// Uniform samples from a ball (Gaussian direction, radius^(1/n) scaling).
std::vector<Point> sample_ball(const Ball& ball, const SamplerConfig& cfg);

/// The k-th point of the sample_ball stream, without materializing the rest.
Point ball_point(const Ball& ball, std::uint64_t seed, std::uint64_t index);

/// Uniform samples from outer \ B(0, inner_radius), by rejection from the
/// sample_ball stream. Errors if the region is empty or the acceptance
/// rate falls below 1e-6.
std::vector<Point> sample_annulus(const Ball& outer, double inner_radius,
                                  const SamplerConfig& cfg);

} // namespace feasops
