#include "feasops/kirszbraun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "feasops/lipschitz.hpp"
#include "feasops/rng.hpp"

namespace feasops {

namespace {

constexpr double kGoldenAngle = 2.3999632297286533; // pi (3 - sqrt 5)

std::string pair_message(std::size_t i, std::size_t j, double lhs, double rhs) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "pair (%zu, %zu): ||v_i - v_j|| = %.17g > L ||a_i - a_j|| + slack = %.17g", i, j,
                  lhs, rhs);
    return buf;
}

/// Deterministic, well-spread unit directions; equal angles in the plane,
/// a Fibonacci spiral on the 2-sphere, hashed directions above that.
std::vector<Point> spread_directions(int dim, std::size_t count, std::uint64_t seed) {
    std::vector<Point> dirs;
    dirs.reserve(count);
    if (dim == 2) {
        for (std::size_t k = 0; k < count; ++k) {
            const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(count);
            dirs.push_back(point({std::cos(phi), std::sin(phi)}));
        }
    } else if (dim == 3) {
        for (std::size_t k = 0; k < count; ++k) {
            const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
            const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = kGoldenAngle * static_cast<double>(k);
            dirs.push_back(point({rad * std::cos(phi), rad * std::sin(phi), z}));
        }
    } else {
        for (std::size_t k = 0; k < count; ++k) {
            dirs.push_back(rng::unit_direction(seed, k, dim));
        }
    }
    return dirs;
}

std::size_t default_boundary_anchors(int dim) {
    if (dim <= 2) return 512;
    if (dim == 3) return 1024;
    return 2048;
}

} // namespace

void LipschitzSample::validate(double slack) const {
    if (anchors.size() != values.size()) {
        throw Error("lipschitz sample: anchor/value count mismatch");
    }
    if (!(L > 0.0)) throw Error("lipschitz sample: L must be positive");
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        for (std::size_t j = i + 1; j < anchors.size(); ++j) {
            const double da = (anchors[i] - anchors[j]).norm();
            if (da <= 1e-12) {
                throw SampleConsistencyError("anchors " + std::to_string(i) + " and " +
                                             std::to_string(j) + " are not distinct");
            }
            const double dv = (values[i] - values[j]).norm();
            if (dv > L * da + slack) {
                throw SampleConsistencyError(pair_message(i, j, dv, L * da + slack));
            }
        }
    }
}

void write_sample(std::ostream& os, const LipschitzSample& sample) {
    const int dim = sample.size() ? static_cast<int>(sample.anchors.front().size()) : 0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", sample.L);
    os << "L," << buf << ",dim," << dim << '\n';
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (int j = 0; j < dim; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", sample.anchors[i][j]);
            os << buf << ',';
        }
        for (int j = 0; j < dim; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", sample.values[i][j]);
            os << buf << (j + 1 < dim ? "," : "");
        }
        os << '\n';
    }
}

LipschitzSample read_sample(std::istream& is) {
    LipschitzSample sample;
    std::string line;
    if (!std::getline(is, line)) throw Error("sample table: missing header");
    int dim = 0;
    {
        std::istringstream hs(line);
        std::string tag;
        char comma;
        std::getline(hs, tag, ',');
        if (tag != "L") throw Error("sample table: bad header");
        hs >> sample.L >> comma;
        std::getline(hs, tag, ',');
        hs >> dim;
        if (dim < 1) throw Error("sample table: bad dimension");
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        Point a(dim), v(dim);
        std::string cell;
        for (int j = 0; j < dim; ++j) {
            if (!std::getline(ls, cell, ',')) throw Error("sample table: short row");
            a[j] = std::stod(cell);
        }
        for (int j = 0; j < dim; ++j) {
            if (!std::getline(ls, cell, ',')) throw Error("sample table: short row");
            v[j] = std::stod(cell);
        }
        sample.anchors.push_back(std::move(a));
        sample.values.push_back(std::move(v));
    }
    return sample;
}

MinimaxResult solve_minimax(const std::vector<Point>& centers, const std::vector<double>& radii,
                            const MinimaxSettings& settings, const SetDescriptor* fold_in) {
    if (centers.empty()) throw Error("solve_minimax: needs at least one ball");
    if (centers.size() != radii.size()) throw Error("solve_minimax: center/radius mismatch");
    const int dim = static_cast<int>(centers.front().size());
    Eigen::MatrixXd c(dim, static_cast<Eigen::Index>(centers.size()));
    Eigen::VectorXd r(static_cast<Eigen::Index>(radii.size()));
    for (std::size_t i = 0; i < centers.size(); ++i) {
        require_finite(centers[i], "minimax center");
        if (!std::isfinite(radii[i])) throw Error("solve_minimax: non-finite radius");
        c.col(static_cast<Eigen::Index>(i)) = centers[i];
        r[static_cast<Eigen::Index>(i)] = radii[i];
    }

    // h(y) and the index of the active term; index -1 marks the folded set.
    Eigen::VectorXd dists(c.cols());
    auto eval = [&](const Point& y, int& idx) {
        dists = (c.colwise() - y).colwise().norm();
        Eigen::Index best;
        double h = (dists - r).maxCoeff(&best);
        idx = static_cast<int>(best);
        if (fold_in != nullptr) {
            const double hr = distance(*fold_in, y);
            if (hr > h) {
                h = hr;
                idx = -1;
            }
        }
        return h;
    };

    Point y = c.rowwise().mean();
    int idx;
    double h = eval(y, idx);
    Point best_y = y;
    double best_h = h;
    // min h >= -max radius, which caps the useful initial gap.
    double gap = std::clamp(0.25 * (h + r.maxCoeff()), 1e-3, 10.0);
    int stall = 0;
    std::size_t iter = 0;
    for (; iter < settings.max_iterations; ++iter) {
        if (gap <= settings.min_gap) break;
        Point g;
        if (idx >= 0) {
            const Point u = y - c.col(idx);
            const double n = u.norm();
            if (n < 1e-300) break; // 0 is a subgradient: y minimizes the active term
            g = u / n;
        } else {
            const Point p = project(*fold_in, y);
            const Point u = y - p;
            const double n = u.norm();
            if (n < 1e-300) break;
            g = u / n;
        }
        const double target = best_h - gap;
        if (h <= target) {
            gap *= 0.5;
            continue;
        }
        y -= (h - target) * g; // ||g|| = 1
        h = eval(y, idx);
        if (h < best_h - 1e-18) {
            best_h = h;
            best_y = y;
            stall = 0;
        } else if (++stall >= settings.stall_limit) {
            gap *= 0.5;
            stall = 0;
        }
    }
    return {std::move(best_y), best_h, iter};
}

ExtensionMap::ExtensionMap(LipschitzSample sample, MinimaxSettings settings,
                           std::optional<SetDescriptor> range, bool memoize)
    : sample_(std::move(sample)), settings_(settings), range_(std::move(range)),
      memoize_(memoize) {
    if (sample_.size() == 0) throw Error("extension map: empty sample");
}

Point ExtensionMap::solve_at(const Point& x) {
    const std::size_t m = sample_.size();
    std::vector<double> radii(m);
    for (std::size_t i = 0; i < m; ++i) {
        radii[i] = sample_.L * (x - sample_.anchors[i]).norm();
    }

    // Work on the tightest constraints and pull in violated ones until the
    // subset solution is valid for the whole system; binding balls are the
    // small ones near the query, so this converges in a round or two.
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return radii[a] != radii[b] ? radii[a] < radii[b] : a < b;
    });
    std::vector<char> in_subset(m, 0);
    std::vector<Point> centers;
    std::vector<double> subset_radii;
    auto add = [&](std::size_t i) {
        if (in_subset[i]) return;
        in_subset[i] = 1;
        centers.push_back(sample_.values[i]);
        subset_radii.push_back(radii[i]);
    };
    for (std::size_t k = 0; k < std::min<std::size_t>(m, 96); ++k) add(order[k]);

    MinimaxResult res;
    for (int round = 0; round < 32; ++round) {
        res = solve_minimax(centers, subset_radii, settings_);
        double worst = -1e300;
        std::size_t worst_i = m;
        for (std::size_t i = 0; i < m; ++i) {
            if (in_subset[i]) continue;
            const double v = (res.point - sample_.values[i]).norm() - radii[i];
            if (v > worst) {
                worst = v;
                worst_i = i;
            }
        }
        if (worst_i == m || worst <= res.h + 1e-12) break;
        add(worst_i);
        res.h = std::max(res.h, worst);
    }
    double achieved = res.h;
    Point y = std::move(res.point);
    if (range_) {
        Point projected = project(*range_, y);
        double viol = 0.0;
        for (std::size_t i = 0; i < sample_.size(); ++i) {
            viol = std::max(viol, (projected - sample_.values[i]).norm() - radii[i]);
        }
        if (viol > settings_.feasibility_tol) {
            // Fold the range into the constraint system and try again.
            res = solve_minimax(sample_.values, radii, settings_, &*range_);
            projected = project(*range_, res.point);
            viol = 0.0;
            for (std::size_t i = 0; i < sample_.size(); ++i) {
                viol = std::max(viol, (projected - sample_.values[i]).norm() - radii[i]);
            }
        }
        y = std::move(projected);
        achieved = viol;
    }
    if (achieved > settings_.feasibility_tol) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "achieved h = %.3e > tol = %.3e", achieved,
                      settings_.feasibility_tol);
        throw InfeasibleExtension(std::string("extension infeasible at query: ") + buf);
    }
    return y;
}

Point ExtensionMap::evaluate(const Point& x) {
    for (std::size_t i = 0; i < sample_.size(); ++i) {
        if ((x - sample_.anchors[i]).squaredNorm() == 0.0) return sample_.values[i];
    }
    Point y = solve_at(x);
    if (memoize_) {
        sample_.anchors.push_back(x);
        sample_.values.push_back(y);
    }
    return y;
}

PiecewiseOperator::PiecewiseOperator(double switch_radius, StepFn outside,
                                     std::shared_ptr<ExtensionMap> inner)
    : switch_radius_(switch_radius), outside_(std::move(outside)), inner_(std::move(inner)) {}

Point PiecewiseOperator::operator()(const Point& x) const {
    if (x.norm() >= switch_radius_) return outside_(x);
    return inner_->evaluate(x);
}

namespace {

/// Dedupes anchors (1e-12) and evaluates the closed form on each.
LipschitzSample make_sample(const std::vector<Point>& anchors, const StepFn& closed_form,
                            double L) {
    LipschitzSample sample;
    sample.L = L;
    for (const Point& a : anchors) {
        bool dup = false;
        for (const Point& b : sample.anchors) {
            if ((a - b).norm() <= 1e-12) {
                dup = true;
                break;
            }
        }
        if (dup) continue;
        sample.anchors.push_back(a);
        sample.values.push_back(closed_form(a));
    }
    return sample;
}

} // namespace

PiecewiseOperator build_F(const SetDescriptor& C, double beta, const FamilyParams& p,
                          const SamplerConfig& cfg, const Ball& region,
                          const BuildSettings& settings) {
    if (!(beta >= 0.0 && beta < 1.0)) throw Error("build_F: beta must lie in [0,1)");
    if (!C.convex()) throw Error("build_F: C must be convex");
    const int dim = region.dim();
    const SetDescriptor sphere = SetDescriptor::unit_sphere(dim);
    const double rho = 1.0 - beta;
    const double L = family_bound(p, beta).value;
    StepFn closed_form = [p, sphere, C](const Point& x) { return family_step(p, sphere, C, x); };

    std::vector<Point> anchors;
    const std::size_t n_boundary =
        settings.boundary_anchors ? settings.boundary_anchors : default_boundary_anchors(dim);
    for (const Point& u : spread_directions(dim, n_boundary, rng::splitmix64(cfg.seed ^ 0xb0d7))) {
        if (settings.halfspace_variant && u[0] < 0.0) continue;
        anchors.push_back(rho * u);
    }
    // Annulus anchors: points of the region with norm >= 1-beta; half of
    // them biased toward the switch boundary where the extension has to
    // match the closed form most closely.
    const std::uint64_t annulus_seed = rng::splitmix64(cfg.seed ^ 0xa22a);
    std::uint64_t index = 0;
    std::size_t taken = 0;
    std::uint64_t attempts = 0;
    while (taken < settings.annulus_anchors && attempts < 1000000) {
        ++attempts;
        Point x;
        if (taken % 2 == 0) {
            x = ball_point(region, annulus_seed, index++);
            if (x.norm() < rho) continue;
        } else {
            const Point u = rng::unit_direction(annulus_seed ^ 1, index++, dim);
            const double scale = 1.0 + 0.1 * rng::uniform01(annulus_seed ^ 2, index, 0);
            x = (rho * scale) * u;
            if (!region.contains(x)) continue;
        }
        if (settings.halfspace_variant && x[0] < 0.0) continue;
        anchors.push_back(std::move(x));
        ++taken;
    }

    LipschitzSample sample = make_sample(anchors, closed_form, L);
    sample.validate(1e-9);

    std::optional<SetDescriptor> range;
    if (settings.halfspace_variant) {
        Point n = Point::Zero(dim);
        n[0] = -1.0; // { x : x_1 >= 0 }
        range = SetDescriptor::halfspace(std::move(n), 0.0);
    }
    auto inner = std::make_shared<ExtensionMap>(std::move(sample), settings.solver,
                                                std::move(range), settings.memoize);
    return {rho, std::move(closed_form), std::move(inner)};
}

PiecewiseOperator build_F1(const SetDescriptor& C, double beta, const Point& x0, double r,
                           const SamplerConfig& cfg, const BuildSettings& settings) {
    if (!(beta >= 0.0 && beta < 1.0)) throw Error("build_F1: beta must lie in [0,1)");
    if (!(r >= 2.0)) throw Error("build_F1: needs r >= 2");
    if (!C.convex()) throw Error("build_F1: C must be convex");
    const int dim = static_cast<int>(x0.size());
    if (std::abs(x0.norm() - 1.0) > 1e-10 || !contains(C, x0, 1e-10)) {
        throw Error("build_F1: x0 must lie on the sphere and in C (within 1e-10)");
    }
    const double rho = 1.0 - beta;
    const double L = dr_bound(beta).value; // 1/(1-beta)
    StepFn closed_form = [C](const Point& x) { return vn_step(C, x); };

    std::vector<Point> anchors;
    const std::size_t n_boundary =
        settings.boundary_anchors ? settings.boundary_anchors : default_boundary_anchors(dim);
    for (const Point& u : spread_directions(dim, n_boundary, rng::splitmix64(cfg.seed ^ 0xf1))) {
        if (settings.halfspace_variant && u[0] < 0.0) continue;
        anchors.push_back(rho * u);
    }
    LipschitzSample sample = make_sample(anchors, closed_form, L);
    sample.validate(1e-9);

    std::optional<SetDescriptor> range = SetDescriptor::closed_ball(x0, r);
    auto inner = std::make_shared<ExtensionMap>(std::move(sample), settings.solver,
                                                std::move(range), settings.memoize);
    return {rho, std::move(closed_form), std::move(inner)};
}

} // namespace feasops
