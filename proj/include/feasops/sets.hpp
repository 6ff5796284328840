#pragma once

#include <string>
#include <variant>
#include <vector>

#include "feasops/space.hpp"

namespace feasops {

// Closed sets with exact, closed-form nearest-point maps. Everything here
// is convex except the sphere kinds, whose projection is undefined at the
// origin (every sphere point is nearest).

struct UnitSphereSet {};

struct ScaledSphereSet {
    double rho = 1.0; // { x : ||x|| = rho }
};

/// { t*e1 + lambda*e2 : t real }
struct LineSet {
    double lambda = 0.0;
};

/// base + span of pairwise-orthonormal directions.
struct AffineSubspaceSet {
    Point base;
    std::vector<Point> directions;
};

/// { x : <normal, x> <= offset }, normal of unit length.
struct HalfspaceSet {
    Point normal;
    double offset = 0.0;
};

struct ClosedBallSet {
    Point center;
    double radius = 1.0;
};

/// { x : lower <= x <= upper } coordinatewise.
struct BoxSet {
    Point lower;
    Point upper;
};

class SetDescriptor {
public:
    using Shape = std::variant<UnitSphereSet, ScaledSphereSet, LineSet, AffineSubspaceSet,
                               HalfspaceSet, ClosedBallSet, BoxSet>;

    static SetDescriptor unit_sphere(int dim);
    static SetDescriptor scaled_sphere(double rho, int dim);
    static SetDescriptor line(double lambda, int dim);
    static SetDescriptor affine_subspace(Point base, std::vector<Point> directions);
    static SetDescriptor halfspace(Point normal, double offset);
    static SetDescriptor closed_ball(Point center, double radius);
    static SetDescriptor box(Point lower, Point upper);

    int dim() const { return dim_; }
    bool convex() const;
    const Shape& shape() const { return shape_; }
    std::string kind_name() const;

private:
    SetDescriptor(Shape shape, int dim);

    Shape shape_;
    int dim_ = 0;
};

/// Nearest point of the set. Throws MultiValuedProjection for sphere kinds
/// at the origin.
Point project(const SetDescriptor& set, const Point& x);

/// 2*project(set, x) - x.
Point reflect(const SetDescriptor& set, const Point& x);

/// Distance from x to the set (never throws; sphere distance at the origin
/// is the sphere radius).
double distance(const SetDescriptor& set, const Point& x);

/// distance(set, x) <= tol.
bool contains(const SetDescriptor& set, const Point& x, double tol);

/// The points of S ∩ L_lambda for 0 <= lambda <= 1 (two points, or the
/// single tangent point at lambda = 1). Throws EmptyIntersection above 1.
std::vector<Point> intersection_points_sphere_line(double lambda, int dim);

} // namespace feasops
