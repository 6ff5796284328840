#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "feasops/ergodic.hpp"

namespace feasops {

/// One experiment, loaded from a flat JSON config. Unused fields keep
/// their defaults; validate() checks the ones the command needs.
struct ExperimentConfig {
    std::string command; // trajectory | lipschitz-table | ergodic-dr |
                         // ergodic-family | ergodic-vn | sign-invariance |
                         // extension-check
    int dimension = 2;
    std::optional<double> lambda;          // line constraint set
    std::optional<nlohmann::json> set;     // explicit convex set spec
    double beta = 0.5;
    double alpha = 0.9;
    double r = 0.0;
    FamilyParams family = FamilyParams::douglas_rachford();
    std::uint64_t seed = 1;
    std::size_t samples = 10000;
    std::size_t pairs = 200;
    int n_max = 60;
    int max_iter = 5000;
    double conv_tol = 1e-10;
    std::vector<double> x_start;           // trajectory start
    std::optional<std::vector<double>> x0; // pipeline center; derived for lines
    std::vector<double> betas{0.1, 0.5, 0.9};          // lipschitz-table grid
    std::vector<FamilyParams> family_grid;             // extra table rows
    std::size_t anchors = 12;              // extension-check sample size
    double L = 1.0;                        // extension-check constant
    bool halfspace_variant = false;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);
    nlohmann::json to_json() const;
};

/// JSON shapes for the set catalog, shared by configs and fixtures.
nlohmann::json set_to_json(const SetDescriptor& set);
SetDescriptor set_from_json(const nlohmann::json& j, int dim);

/// Empty iff the command's preconditions hold; entries name the failed
/// inequality and both sides (e.g. "r >= 2/(1-beta): 3 < 4").
std::vector<std::string> validate(const ExperimentConfig& cfg);

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitBoundViolation = 3;

/// Runs the experiment, writing outputs under out_dir (created if needed).
/// Outputs are written atomically; a failed run leaves *.partial files
/// only. Returns one of the kExit* codes; diagnostics go to err.
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& err);

} // namespace feasops
