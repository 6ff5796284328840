#include "feasops/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "feasops/rng.hpp"

namespace feasops {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmtg(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

/// Writes to <path>.tmp; commit() renames onto path. Without a commit the
/// destructor renames to <path>.partial so failed runs are visible.
class AtomicWriter {
public:
    explicit AtomicWriter(fs::path path) : path_(std::move(path)), tmp_(path_.string() + ".tmp") {
        os_.open(tmp_);
        if (!os_) throw Error("cannot open " + tmp_.string());
    }
    ~AtomicWriter() {
        if (committed_) return;
        os_.close();
        std::error_code ec;
        fs::rename(tmp_, fs::path(path_.string() + ".partial"), ec);
    }
    std::ostream& stream() { return os_; }
    void commit() {
        os_.close();
        if (!os_) throw Error("write failed for " + tmp_.string());
        fs::rename(tmp_, path_);
        committed_ = true;
    }

private:
    fs::path path_;
    fs::path tmp_;
    std::ofstream os_;
    bool committed_ = false;
};

void write_config_header(std::ostream& os, const ExperimentConfig& cfg) {
    os << "# config " << cfg.to_json().dump() << "\n# seed " << cfg.seed << '\n';
}

Point to_point(const std::vector<double>& v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<Eigen::Index>(i)] = v[i];
    return p;
}

std::vector<double> from_point(const Point& p) {
    return {p.data(), p.data() + p.size()};
}

/// The constraint set of the experiment: an explicit spec wins, otherwise
/// the line L_lambda.
SetDescriptor constraint_set(const ExperimentConfig& cfg) {
    if (cfg.set) return set_from_json(*cfg.set, cfg.dimension);
    if (!cfg.lambda) throw ConfigError("config needs either \"lambda\" or \"set\"");
    return SetDescriptor::line(*cfg.lambda, cfg.dimension);
}

/// Pipeline center: explicit x0, or the first sphere/line intersection.
Point pipeline_center(const ExperimentConfig& cfg) {
    if (cfg.x0) return to_point(*cfg.x0);
    if (cfg.lambda && *cfg.lambda <= 1.0) {
        return intersection_points_sphere_line(*cfg.lambda, cfg.dimension).front();
    }
    throw ConfigError("config needs \"x0\" when the set is not a feasible line");
}

SmoothingPlan plan_from_config(const ExperimentConfig& cfg) {
    SmoothingPlan plan;
    plan.beta = cfg.beta;
    plan.alpha = cfg.alpha;
    plan.r = cfg.r;
    plan.x0 = pipeline_center(cfg);
    plan.family = cfg.family;
    return plan;
}

json report_to_json(const ErgodicReport& report) {
    json decay = json::array();
    for (const DecayRow& row : report.decay) {
        decay.push_back({{"n", row.n}, {"observed", row.observed}, {"bound", row.bound}});
    }
    return {{"approx",
             {{"sup", report.approx_sup},
              {"bound", report.approx_bound},
              {"slack", report.approx_slack},
              {"samples", report.region_samples},
              {"pass", report.approx_pass}}},
            {"decay",
             {{"rows", decay},
              {"slack", report.decay_slack},
              {"pairs", report.decay_pairs},
              {"n_max", report.n_max},
              {"pass", report.decay_pass}}},
            {"inclusion",
             {{"samples", report.inclusion_samples},
              {"violations", report.inclusion_violations}}},
            {"gamma", report.gamma},
            {"lipschitz_bound", report.lipschitz_bound},
            {"fixed_point_drift", report.fixed_point_drift},
            {"dist_check_max", report.dist_check_max},
            {"seed", report.seed},
            {"notes", report.notes},
            {"pass", report.pass}};
}

int run_trajectory(const ExperimentConfig& cfg, const fs::path& dir) {
    const SetDescriptor sphere = SetDescriptor::unit_sphere(cfg.dimension);
    const SetDescriptor set = constraint_set(cfg);
    const Point x0 = to_point(cfg.x_start);
    StepFn step = [&](const Point& x) { return dr_step(sphere, set, x); };
    IterationTrace trace = iterate(step, x0, cfg.max_iter, cfg.conv_tol);

    AtomicWriter w(dir / "trajectory.csv");
    write_config_header(w.stream(), cfg);
    write_trace_csv(w.stream(), trace);
    w.commit();
    return kExitOk;
}

struct TableRow {
    std::string kind;
    double beta;
    FamilyParams params;
    double theoretical;
    double empirical;
    std::size_t pairs;
    double slack;
};

int run_lipschitz_table(const ExperimentConfig& cfg, const fs::path& dir) {
    const SetDescriptor sphere = SetDescriptor::unit_sphere(cfg.dimension);
    const SetDescriptor set = constraint_set(cfg);
    std::vector<TableRow> rows;
    for (double beta : cfg.betas) {
        const double inner = 1.0 - beta;
        const AnnulusDomain domain{Ball(Point::Zero(cfg.dimension), 3.0), inner};
        const SamplerConfig sampler{cfg.seed, cfg.pairs};

        MapFn reflect_sphere = [&](const Point& x) { return reflect(sphere, x); };
        MapFn project_sphere = [&](const Point& x) { return project(sphere, x); };
        rows.push_back({"reflect-sphere", beta, {}, sphere_reflection_bound(beta).value,
                        empirical_lipschitz(reflect_sphere, domain, sampler).sup_ratio, cfg.pairs,
                        1e-9});
        rows.push_back({"project-sphere", beta, {}, dr_bound(beta).value,
                        empirical_lipschitz(project_sphere, domain, sampler).sup_ratio, cfg.pairs,
                        1e-9});
        MapFn dr = [&](const Point& x) { return dr_step(sphere, set, x); };
        rows.push_back({"dr", beta, FamilyParams::douglas_rachford(), dr_bound(beta).value,
                        empirical_lipschitz(dr, domain, sampler).sup_ratio, cfg.pairs, 1e-9});
        for (const FamilyParams& p : cfg.family_grid) {
            MapFn fam = [&, p](const Point& x) { return family_step(p, sphere, set, x); };
            rows.push_back({"family", beta, p, family_bound(p, beta).value,
                            empirical_lipschitz(fam, domain, sampler).sup_ratio, cfg.pairs, 1e-6});
        }
    }

    bool violated = false;
    AtomicWriter w(dir / "lipschitz_table.csv");
    write_config_header(w.stream(), cfg);
    w.stream() << "kind,beta,s1,s2,s3,theoretical,empirical,pairs,seed\n";
    for (const TableRow& row : rows) {
        if (row.empirical > row.theoretical + row.slack) violated = true;
        w.stream() << row.kind << ',' << fmt17(row.beta) << ',' << fmt17(row.params.s1) << ','
                   << fmt17(row.params.s2) << ',' << fmt17(row.params.s3) << ','
                   << fmt17(row.theoretical) << ',' << fmt17(row.empirical) << ',' << row.pairs
                   << ',' << cfg.seed << '\n';
    }
    w.commit();
    return violated ? kExitBoundViolation : kExitOk;
}

int run_ergodic(const ExperimentConfig& cfg, const fs::path& dir) {
    const SetDescriptor set = constraint_set(cfg);
    const SmoothingPlan plan = plan_from_config(cfg);
    const SamplerConfig sampler{cfg.seed, cfg.samples};
    PipelineSamples sizes;
    sizes.region_samples = cfg.samples;
    sizes.decay_pairs = cfg.pairs;
    sizes.n_max = cfg.n_max;
    BuildSettings build;
    build.halfspace_variant = cfg.halfspace_variant;

    ErgodicReport report;
    bool consistency_refuted = false;
    try {
        if (cfg.command == "ergodic-dr") {
            report = run_pipeline_dr(set, plan, sampler, sizes, build);
        } else if (cfg.command == "ergodic-family") {
            report = run_pipeline_family(set, plan, sampler, sizes, build);
        } else {
            report = run_pipeline_vn(set, plan, sampler, sizes, build);
        }
    } catch (const SampleConsistencyError& e) {
        // The anchor data refutes the claimed Lipschitz constant: report it
        // as a bound violation rather than a crash.
        consistency_refuted = true;
        report.notes = std::string("lipschitz constant refuted by anchor data: ") + e.what();
        report.pass = false;
        report.seed = cfg.seed;
    }

    {
        AtomicWriter w(dir / "ergodic_report.json");
        json j = report_to_json(report);
        j["config"] = cfg.to_json();
        w.stream() << j.dump(2) << '\n';
        w.commit();
    }
    {
        AtomicWriter w(dir / "decay.csv");
        write_config_header(w.stream(), cfg);
        w.stream() << "n,observed,bound\n";
        for (const DecayRow& row : report.decay) {
            w.stream() << row.n << ',' << fmt17(row.observed) << ',' << fmt17(row.bound) << '\n';
        }
        w.commit();
    }
    return (report.pass && !consistency_refuted) ? kExitOk : kExitBoundViolation;
}

int run_sign_invariance(const ExperimentConfig& cfg, const fs::path& dir) {
    if (!cfg.lambda) throw ConfigError("sign-invariance needs \"lambda\"");
    const SignInvarianceReport report =
        check_sign_invariance(*cfg.lambda, SamplerConfig{cfg.seed, cfg.samples}, cfg.dimension);
    AtomicWriter w(dir / "sign_invariance.json");
    json j{{"config", cfg.to_json()},
           {"samples", report.samples},
           {"violations", report.violations},
           {"max_zero_drift", report.max_zero_drift},
           {"pass", report.violations == 0 && report.max_zero_drift <= 1e-12}};
    w.stream() << j.dump(2) << '\n';
    w.commit();
    return (report.violations == 0 && report.max_zero_drift <= 1e-12) ? kExitOk
                                                                      : kExitBoundViolation;
}

int run_extension_check(const ExperimentConfig& cfg, const fs::path& dir) {
    // Random consistent data: values from a rotation scaled to 0.85 L, so
    // the sample is strictly inside its Lipschitz budget.
    const int dim = cfg.dimension;
    const double contraction = 0.85 * cfg.L;
    const std::uint64_t aseed = rng::splitmix64(cfg.seed ^ 0xac);
    LipschitzSample sample;
    sample.L = cfg.L;
    const Ball dom(Point::Zero(dim), 2.0);
    for (std::size_t i = 0; sample.anchors.size() < cfg.anchors && i < 10 * cfg.anchors + 100;
         ++i) {
        Point a = ball_point(dom, aseed, i);
        bool dup = false;
        for (const Point& b : sample.anchors) {
            if ((a - b).norm() <= 1e-6) dup = true;
        }
        if (dup) continue;
        Point v(dim);
        // Rotate coordinates pairwise and scale; exactly contraction-Lipschitz.
        const double angle = 0.7;
        v = a;
        if (dim >= 2) {
            v[0] = std::cos(angle) * a[0] - std::sin(angle) * a[1];
            v[1] = std::sin(angle) * a[0] + std::cos(angle) * a[1];
        }
        v *= contraction;
        sample.anchors.push_back(std::move(a));
        sample.values.push_back(std::move(v));
    }
    sample.validate(1e-9);
    ExtensionMap ext(sample);

    double max_violation = 0.0;
    double max_anchor_drift = 0.0;
    const std::uint64_t qseed = rng::splitmix64(cfg.seed ^ 0x91);
    for (std::size_t q = 0; q < cfg.samples; ++q) {
        const Point x = ball_point(dom, qseed, q);
        const Point y = ext.evaluate(x);
        for (std::size_t i = 0; i < sample.size(); ++i) {
            const double lhs = (y - sample.values[i]).norm();
            const double rhs = cfg.L * (x - sample.anchors[i]).norm();
            max_violation = std::max(max_violation, lhs - rhs);
        }
    }
    for (std::size_t i = 0; i < sample.size(); ++i) {
        max_anchor_drift = std::max(
            max_anchor_drift, (ext.evaluate(sample.anchors[i]) - sample.values[i]).norm());
    }
    const bool pass = max_violation <= 1e-6 && max_anchor_drift == 0.0;

    AtomicWriter w(dir / "extension_check.json");
    json j{{"config", cfg.to_json()},
           {"queries", cfg.samples},
           {"anchors", sample.size()},
           {"max_constraint_violation", max_violation},
           {"max_anchor_drift", max_anchor_drift},
           {"pass", pass}};
    w.stream() << j.dump(2) << '\n';
    w.commit();
    return pass ? kExitOk : kExitBoundViolation;
}

} // namespace

json set_to_json(const SetDescriptor& set) {
    json j{{"kind", set.kind_name()}};
    if (const auto* s = std::get_if<ScaledSphereSet>(&set.shape())) j["rho"] = s->rho;
    if (const auto* s = std::get_if<LineSet>(&set.shape())) j["lambda"] = s->lambda;
    if (const auto* s = std::get_if<AffineSubspaceSet>(&set.shape())) {
        j["base"] = from_point(s->base);
        json dirs = json::array();
        for (const Point& d : s->directions) dirs.push_back(from_point(d));
        j["directions"] = dirs;
    }
    if (const auto* s = std::get_if<HalfspaceSet>(&set.shape())) {
        j["normal"] = from_point(s->normal);
        j["offset"] = s->offset;
    }
    if (const auto* s = std::get_if<ClosedBallSet>(&set.shape())) {
        j["center"] = from_point(s->center);
        j["radius"] = s->radius;
    }
    if (const auto* s = std::get_if<BoxSet>(&set.shape())) {
        j["lower"] = from_point(s->lower);
        j["upper"] = from_point(s->upper);
    }
    return j;
}

SetDescriptor set_from_json(const json& j, int dim) {
    const std::string kind = j.at("kind").get<std::string>();
    auto vec = [&](const char* key) { return to_point(j.at(key).get<std::vector<double>>()); };
    if (kind == "unit-sphere") return SetDescriptor::unit_sphere(dim);
    if (kind == "scaled-sphere") return SetDescriptor::scaled_sphere(j.at("rho").get<double>(), dim);
    if (kind == "line") return SetDescriptor::line(j.at("lambda").get<double>(), dim);
    if (kind == "affine") {
        std::vector<Point> dirs;
        for (const auto& d : j.at("directions")) dirs.push_back(to_point(d.get<std::vector<double>>()));
        return SetDescriptor::affine_subspace(vec("base"), std::move(dirs));
    }
    if (kind == "halfspace") return SetDescriptor::halfspace(vec("normal"), j.at("offset").get<double>());
    if (kind == "ball") return SetDescriptor::closed_ball(vec("center"), j.at("radius").get<double>());
    if (kind == "box") return SetDescriptor::box(vec("lower"), vec("upper"));
    throw ConfigError("unknown set kind: " + kind);
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.command = j.at("command").get<std::string>();
    cfg.dimension = j.value("dimension", cfg.dimension);
    if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
    if (j.contains("set")) cfg.set = j["set"];
    cfg.beta = j.value("beta", cfg.beta);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.r = j.value("r", cfg.r);
    if (j.contains("family")) {
        const auto& f = j["family"];
        if (f.is_array()) {
            cfg.family = {f.at(0).get<double>(), f.at(1).get<double>(), f.at(2).get<double>()};
        } else {
            cfg.family = {f.value("s1", 0.5), f.value("s2", 0.0), f.value("s3", 0.0)};
        }
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.samples = j.value("samples", cfg.samples);
    cfg.pairs = j.value("pairs", cfg.pairs);
    cfg.n_max = j.value("n_max", cfg.n_max);
    cfg.max_iter = j.value("max_iter", cfg.max_iter);
    cfg.conv_tol = j.value("conv_tol", cfg.conv_tol);
    if (j.contains("x_start")) cfg.x_start = j["x_start"].get<std::vector<double>>();
    if (j.contains("x0")) cfg.x0 = j["x0"].get<std::vector<double>>();
    if (j.contains("betas")) cfg.betas = j["betas"].get<std::vector<double>>();
    if (j.contains("family_grid")) {
        for (const auto& f : j["family_grid"]) {
            cfg.family_grid.push_back(
                {f.at(0).get<double>(), f.at(1).get<double>(), f.at(2).get<double>()});
        }
    }
    cfg.anchors = j.value("anchors", cfg.anchors);
    cfg.L = j.value("L", cfg.L);
    cfg.halfspace_variant = j.value("halfspace_variant", cfg.halfspace_variant);
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config: " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    try {
        return from_json(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
}

json ExperimentConfig::to_json() const {
    json j{{"command", command}, {"dimension", dimension},
           {"beta", beta},       {"alpha", alpha},
           {"r", r},             {"family", {family.s1, family.s2, family.s3}},
           {"seed", seed},       {"samples", samples},
           {"pairs", pairs},     {"n_max", n_max},
           {"max_iter", max_iter}, {"conv_tol", conv_tol},
           {"anchors", anchors}, {"L", L},
           {"halfspace_variant", halfspace_variant}};
    if (lambda) j["lambda"] = *lambda;
    if (set) j["set"] = *set;
    if (!x_start.empty()) j["x_start"] = x_start;
    if (x0) j["x0"] = *x0;
    j["betas"] = betas;
    if (!family_grid.empty()) {
        json grid = json::array();
        for (const FamilyParams& p : family_grid) grid.push_back({p.s1, p.s2, p.s3});
        j["family_grid"] = grid;
    }
    return j;
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
    std::vector<std::string> out;
    auto fail = [&](const std::string& msg) { out.push_back(msg); };

    static const std::vector<std::string> commands{
        "trajectory",     "lipschitz-table", "ergodic-dr",      "ergodic-family",
        "ergodic-vn",     "sign-invariance", "extension-check"};
    if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end()) {
        fail("unknown command: " + cfg.command);
        return out;
    }
    if (cfg.dimension < 2) fail("dimension >= 2: " + std::to_string(cfg.dimension) + " < 2");

    if (cfg.command == "trajectory") {
        if (!cfg.lambda && !cfg.set) fail("trajectory needs \"lambda\" or \"set\"");
        if (cfg.lambda && *cfg.lambda < 0.0) fail("lambda >= 0: " + fmtg(*cfg.lambda) + " < 0");
        if (cfg.x_start.size() != static_cast<std::size_t>(cfg.dimension)) {
            fail("x_start must have " + std::to_string(cfg.dimension) + " coordinates");
        }
        if (cfg.max_iter < 1) fail("max_iter >= 1");
        return out;
    }
    if (cfg.command == "lipschitz-table") {
        for (double b : cfg.betas) {
            if (!(b >= 0.0 && b < 1.0)) fail("beta in [0,1): " + fmtg(b) + " outside");
        }
        if (cfg.pairs < 2) fail("pairs >= 2");
        if (!cfg.lambda && !cfg.set) fail("lipschitz-table needs \"lambda\" or \"set\"");
        return out;
    }
    if (cfg.command == "sign-invariance") {
        if (!cfg.lambda) fail("sign-invariance needs \"lambda\"");
        else if (*cfg.lambda < 0.0) fail("lambda >= 0: " + fmtg(*cfg.lambda) + " < 0");
        return out;
    }
    if (cfg.command == "extension-check") {
        if (cfg.anchors < 1) fail("anchors >= 1");
        if (!(cfg.L > 0.0)) fail("L > 0: " + fmtg(cfg.L) + " <= 0");
        return out;
    }

    // The ergodic pipelines share the plan inequalities.
    if (!(cfg.beta >= 0.0 && cfg.beta < 1.0)) {
        fail("beta in [0,1): " + fmtg(cfg.beta) + " outside");
        return out;
    }
    PipelineKind kind = PipelineKind::Family;
    if (cfg.command == "ergodic-dr") kind = PipelineKind::DouglasRachford;
    if (cfg.command == "ergodic-vn") kind = PipelineKind::VonNeumann;
    try {
        const SetDescriptor set = constraint_set(cfg);
        SmoothingPlan plan = plan_from_config(cfg);
        if (cfg.command == "ergodic-dr") plan.family = FamilyParams::douglas_rachford();
        for (const std::string& v : validate_plan(plan, kind, set)) out.push_back(v);
    } catch (const Error& e) {
        fail(e.what());
    }
    return out;
}

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& err) {
    const auto violations = validate(cfg);
    if (!violations.empty()) {
        for (const std::string& v : violations) err << "precondition violated: " << v << '\n';
        return kExitValidation;
    }
    try {
        const fs::path dir(out_dir);
        fs::create_directories(dir);
        if (cfg.command == "trajectory") return run_trajectory(cfg, dir);
        if (cfg.command == "lipschitz-table") return run_lipschitz_table(cfg, dir);
        if (cfg.command == "sign-invariance") return run_sign_invariance(cfg, dir);
        if (cfg.command == "extension-check") return run_extension_check(cfg, dir);
        return run_ergodic(cfg, dir);
    } catch (const std::exception& e) {
        err << "runtime failure: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace feasops
