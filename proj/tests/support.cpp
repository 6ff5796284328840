#include "support.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "feasops/rng.hpp"

namespace feasops::testing {

double minimax_value(const std::vector<Point>& centers, const std::vector<double>& radii,
                     const Point& y) {
    double h = -1e300;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        h = std::max(h, (y - centers[i]).norm() - radii[i]);
    }
    return h;
}

Point grid_minimax_oracle(const std::vector<Point>& centers, const std::vector<double>& radii,
                          double half_width) {
    const int dim = static_cast<int>(centers.front().size());
    if (dim != 1 && dim != 2) throw Error("grid oracle supports dimensions 1 and 2 only");

    Point center = Point::Zero(dim);
    for (const Point& c : centers) center += c;
    center /= static_cast<double>(centers.size());

    // The minimizer lies within ||y - c_i|| <= r_i + max(0, h(centroid)) of
    // every center, so this window always covers it.
    const double slop = std::max(0.0, minimax_value(centers, radii, center));
    double cover = 1e300;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        cover = std::min(cover, (centers[i] - center).norm() + radii[i] + slop);
    }
    half_width = std::max(half_width, cover) + 0.25;

    double step = half_width / 120.0;
    Point best = center;
    double best_h = minimax_value(centers, radii, best);
    double span = half_width;
    // Convexity makes coarse-to-fine refinement sound; the window shrinks
    // slower than the step to tolerate shallow valleys.
    while (step > 1e-5) {
        const int k = static_cast<int>(std::ceil(span / step));
        if (dim == 1) {
            for (int i = -k; i <= k; ++i) {
                Point y = best;
                y[0] = center[0] + i * step;
                const double h = minimax_value(centers, radii, y);
                if (h < best_h) {
                    best_h = h;
                    best = y;
                }
            }
        } else {
            Point base = center;
            for (int i = -k; i <= k; ++i) {
                for (int j = -k; j <= k; ++j) {
                    Point y(2);
                    y[0] = base[0] + i * step;
                    y[1] = base[1] + j * step;
                    const double h = minimax_value(centers, radii, y);
                    if (h < best_h) {
                        best_h = h;
                        best = y;
                    }
                }
            }
        }
        center = best;
        span = 24.0 * step;
        step /= 6.0;
    }
    return best;
}

double hull_distance(const std::vector<Point>& values, const Point& y) {
    // Wolfe's algorithm on the shifted points p_i = v_i - y: find the
    // minimum-norm point of their convex hull.
    const int dim = static_cast<int>(y.size());
    std::vector<Point> pts;
    pts.reserve(values.size());
    for (const Point& v : values) pts.push_back(v - y);

    // Start from the shortest point.
    std::size_t start = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].squaredNorm() < pts[start].squaredNorm()) start = i;
    }
    std::vector<std::size_t> corral{start};
    std::vector<double> weights{1.0};
    Point z = pts[start];

    auto affine_min_norm = [&](const std::vector<std::size_t>& S) {
        // Minimize ||sum l_i p_i||^2 subject to sum l_i = 1.
        const int m = static_cast<int>(S.size());
        Eigen::MatrixXd A(m + 1, m + 1);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) A(i, j) = pts[S[i]].dot(pts[S[j]]);
            A(i, m) = 1.0;
            A(m, i) = 1.0;
        }
        A(m, m) = 0.0;
        b[m] = 1.0;
        Eigen::VectorXd sol = A.fullPivLu().solve(b);
        return std::vector<double>(sol.data(), sol.data() + m);
    };

    for (int outer = 0; outer < 200; ++outer) {
        // Most violating vertex.
        std::size_t q = 0;
        double best_dot = 1e300;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double d = z.dot(pts[i]);
            if (d < best_dot) {
                best_dot = d;
                q = i;
            }
        }
        if (best_dot >= z.squaredNorm() - 1e-14 * (1.0 + z.squaredNorm())) break;
        if (std::find(corral.begin(), corral.end(), q) == corral.end()) {
            corral.push_back(q);
            weights.push_back(0.0);
        }
        for (int inner = 0; inner < 200; ++inner) {
            const std::vector<double> lam = affine_min_norm(corral);
            bool positive = true;
            for (double l : lam) {
                if (l < 1e-12) positive = false;
            }
            if (positive) {
                weights = lam;
                break;
            }
            // Step toward lam until a weight hits zero, then drop it.
            double theta = 1.0;
            for (std::size_t i = 0; i < corral.size(); ++i) {
                if (lam[i] < 1e-12) {
                    const double denom = weights[i] - lam[i];
                    if (denom > 1e-300) theta = std::min(theta, weights[i] / denom);
                }
            }
            std::vector<std::size_t> next_corral;
            std::vector<double> next_weights;
            for (std::size_t i = 0; i < corral.size(); ++i) {
                const double w = (1.0 - theta) * weights[i] + theta * lam[i];
                if (w > 1e-12) {
                    next_corral.push_back(corral[i]);
                    next_weights.push_back(w);
                }
            }
            if (next_corral.empty()) {
                next_corral.push_back(corral.front());
                next_weights.push_back(1.0);
            }
            corral = std::move(next_corral);
            weights = std::move(next_weights);
        }
        z = Point::Zero(dim);
        for (std::size_t i = 0; i < corral.size(); ++i) z += weights[i] * pts[corral[i]];
    }
    return z.norm();
}

LipschitzSample random_consistent_sample(int dim, std::size_t count, double L,
                                         std::uint64_t seed) {
    LipschitzSample sample;
    sample.L = L;
    const double contraction = 0.85 * L;
    const double angle = 0.6 + rng::uniform01(seed, 0, 99);
    const Ball dom(Point::Zero(dim), 2.0);
    const Point shift = 0.3 * rng::unit_direction(seed ^ 0x5, 0, dim);
    for (std::size_t i = 0; sample.anchors.size() < count && i < 10 * count + 50; ++i) {
        Point a = ball_point(dom, seed, i);
        bool dup = false;
        for (const Point& b : sample.anchors) {
            if ((a - b).norm() <= 1e-6) dup = true;
        }
        if (dup) continue;
        Point v = a;
        if (dim >= 2) {
            v[0] = std::cos(angle) * a[0] - std::sin(angle) * a[1];
            v[1] = std::sin(angle) * a[0] + std::cos(angle) * a[1];
        }
        v = contraction * v + shift;
        sample.anchors.push_back(std::move(a));
        sample.values.push_back(std::move(v));
    }
    return sample;
}

} // namespace feasops::testing
