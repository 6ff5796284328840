#include "feasops/sets.hpp"

#include <cmath>

namespace feasops {

namespace {

constexpr double kStructureTol = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Point sphere_project(const Point& x, double rho, const char* kind) {
    const double n = x.norm();
    if (n == 0.0) {
        throw MultiValuedProjection(std::string(kind) +
                                    ": projection at the origin is multi-valued");
    }
    return rho * (x / n);
}

} // namespace

SetDescriptor::SetDescriptor(Shape shape, int dim) : shape_(std::move(shape)), dim_(dim) {
    if (dim_ < 1) throw Error("set dimension must be positive");
}

SetDescriptor SetDescriptor::unit_sphere(int dim) { return {UnitSphereSet{}, dim}; }

SetDescriptor SetDescriptor::scaled_sphere(double rho, int dim) {
    if (!(rho > 0.0)) throw Error("scaled sphere: rho must be positive");
    return {ScaledSphereSet{rho}, dim};
}

SetDescriptor SetDescriptor::line(double lambda, int dim) {
    if (lambda < 0.0) throw Error("line: lambda must be nonnegative");
    if (dim < 2) throw Error("line: needs dimension >= 2");
    return {LineSet{lambda}, dim};
}

SetDescriptor SetDescriptor::affine_subspace(Point base, std::vector<Point> directions) {
    require_finite(base, "affine base");
    const int dim = static_cast<int>(base.size());
    for (std::size_t i = 0; i < directions.size(); ++i) {
        require_same_dim(directions[i], base);
        for (std::size_t j = 0; j <= i; ++j) {
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(directions[i].dot(directions[j]) - want) > kStructureTol) {
                throw Error("affine subspace: directions are not orthonormal");
            }
        }
    }
    return {AffineSubspaceSet{std::move(base), std::move(directions)}, dim};
}

SetDescriptor SetDescriptor::halfspace(Point normal, double offset) {
    require_finite(normal, "halfspace normal");
    if (std::abs(normal.norm() - 1.0) > kStructureTol) {
        throw Error("halfspace: normal must have unit norm");
    }
    const int dim = static_cast<int>(normal.size());
    return {HalfspaceSet{std::move(normal), offset}, dim};
}

SetDescriptor SetDescriptor::closed_ball(Point center, double radius) {
    require_finite(center, "ball center");
    if (!(radius >= 0.0)) throw Error("closed ball: radius must be nonnegative");
    const int dim = static_cast<int>(center.size());
    return {ClosedBallSet{std::move(center), radius}, dim};
}

SetDescriptor SetDescriptor::box(Point lower, Point upper) {
    require_same_dim(lower, upper);
    require_finite(lower, "box lower");
    require_finite(upper, "box upper");
    if (((upper - lower).array() < 0.0).any()) throw Error("box: lower must be <= upper");
    const int dim = static_cast<int>(lower.size());
    return {BoxSet{std::move(lower), std::move(upper)}, dim};
}

bool SetDescriptor::convex() const {
    return !std::holds_alternative<UnitSphereSet>(shape_) &&
           !std::holds_alternative<ScaledSphereSet>(shape_);
}

std::string SetDescriptor::kind_name() const {
    return std::visit(Overloaded{[](const UnitSphereSet&) { return std::string("unit-sphere"); },
                                 [](const ScaledSphereSet&) { return std::string("scaled-sphere"); },
                                 [](const LineSet&) { return std::string("line"); },
                                 [](const AffineSubspaceSet&) { return std::string("affine"); },
                                 [](const HalfspaceSet&) { return std::string("halfspace"); },
                                 [](const ClosedBallSet&) { return std::string("ball"); },
                                 [](const BoxSet&) { return std::string("box"); }},
                      shape_);
}

Point project(const SetDescriptor& set, const Point& x) {
    if (static_cast<int>(x.size()) != set.dim()) {
        throw DimensionMismatch("project: point dimension does not match the set");
    }
    return std::visit(
        Overloaded{
            [&](const UnitSphereSet&) { return sphere_project(x, 1.0, "unit sphere"); },
            [&](const ScaledSphereSet& s) { return sphere_project(x, s.rho, "scaled sphere"); },
            [&](const LineSet& s) {
                Point p = Point::Zero(x.size());
                p[0] = x[0];
                p[1] = s.lambda;
                return p;
            },
            [&](const AffineSubspaceSet& s) {
                Point p = s.base;
                for (const Point& d : s.directions) p += d.dot(x - s.base) * d;
                return p;
            },
            [&](const HalfspaceSet& s) {
                const double excess = s.normal.dot(x) - s.offset;
                if (excess <= 0.0) return x;
                return Point(x - excess * s.normal);
            },
            [&](const ClosedBallSet& s) {
                const Point d = x - s.center;
                const double n = d.norm();
                if (n <= s.radius) return x;
                return Point(s.center + (s.radius / n) * d);
            },
            [&](const BoxSet& s) {
                return Point(x.cwiseMax(s.lower).cwiseMin(s.upper));
            }},
        set.shape());
}

Point reflect(const SetDescriptor& set, const Point& x) { return 2.0 * project(set, x) - x; }

double distance(const SetDescriptor& set, const Point& x) {
    if (static_cast<int>(x.size()) != set.dim()) {
        throw DimensionMismatch("distance: point dimension does not match the set");
    }
    // Sphere kinds: |‖x‖ - rho| works at every point, including the origin.
    if (const auto* s = std::get_if<ScaledSphereSet>(&set.shape())) {
        return std::abs(x.norm() - s->rho);
    }
    if (std::holds_alternative<UnitSphereSet>(set.shape())) return std::abs(x.norm() - 1.0);
    return (x - project(set, x)).norm();
}

bool contains(const SetDescriptor& set, const Point& x, double tol) {
    if (tol < 0.0) throw Error("contains: tol must be nonnegative");
    return distance(set, x) <= tol;
}

std::vector<Point> intersection_points_sphere_line(double lambda, int dim) {
    if (lambda < 0.0) throw Error("lambda must be nonnegative");
    if (dim < 2) throw Error("needs dimension >= 2");
    if (lambda > 1.0) {
        throw EmptyIntersection("sphere and line do not intersect for lambda > 1");
    }
    std::vector<Point> out;
    if (lambda == 1.0) {
        Point p = Point::Zero(dim);
        p[1] = 1.0;
        out.push_back(std::move(p));
        return out;
    }
    const double t = std::sqrt(1.0 - lambda * lambda);
    Point plus = Point::Zero(dim);
    plus[0] = t;
    plus[1] = lambda;
    Point minus = plus;
    minus[0] = -t;
    out.push_back(std::move(plus));
    out.push_back(std::move(minus));
    return out;
}

} // namespace feasops
