#pragma once

#include "eepc/damping.hpp"
#include "eepc/diagnostics.hpp"
#include "eepc/systems.hpp"

#include "json.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace eepc {

/// Invalid experiment description; `path` names the offending field (e.g. "grid.dx").
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& what)
        : Error(path + ": " + what), path(std::move(path)) {}
    std::string path;
};

enum class SystemKind { Burgers, KdvH1, KdvH2 };

std::string to_string(SystemKind kind);

struct GridConfig {
    double half_length = 0;
    std::optional<double> dx;  // exactly one of dx / n1 is set
    std::optional<Index> n1;

    double spacing() const;
    Index points() const;
};

struct InitialConfig {
    std::string profile = "gaussian";
    double amplitude = 0.3989422804014327;  // 1 / sqrt(2 pi)
    double centre = 0.0;
    double width = 1.0;
};

struct TimeConfig {
    double t_end = 0;
    double dt = 0;
};

struct SchemeConfig {
    int stages = 2;
    int quadrature_nodes = 8;
    double tol = 1e-13;
    int max_iter = 100;
};

struct OutputConfig {
    std::string directory = "out";
    long stride = 50;
};

struct ExperimentConfig {
    SystemKind system = SystemKind::Burgers;
    GridConfig grid;
    std::optional<KdvParams> params;
    DampingCase damping;
    InitialConfig initial;
    TimeConfig time;
    SchemeConfig scheme;
    OutputConfig output;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& file);
nlohmann::json to_json(const ExperimentConfig& config);

/// Checks cross-field constraints; parse_config already calls this.
void validate(const ExperimentConfig& config);

/// Number of uniform steps, floor(T / dt) up to a 1e-9 relative slack.
long step_count(const TimeConfig& time);

std::unique_ptr<PeriodicSystem> build_system(const ExperimentConfig& config);
VectorXd initial_state(const ExperimentConfig& config);

// cmd_run --------------------------------------------------------------------------

struct IterationStats {
    int min = 0;
    int max = 0;
    double mean = 0;
    long total = 0;
};

struct RunSummary {
    long steps = 0;
    double t_final = 0;
    std::vector<std::string> invariant_names;
    std::vector<std::vector<double>> invariant_values;  // per invariant, per step
    std::vector<ResidualSeries<double>> residuals;
    IterationStats iterations;
    std::vector<std::string> warnings;
    std::filesystem::path directory;
};

/// Integrates the configured experiment and writes solution.csv, invariants.csv,
/// residuals.csv and meta.json into config.output.directory.
RunSummary run_experiment(const ExperimentConfig& config);

// cmd_order --------------------------------------------------------------------------

struct OrderRequest {
    std::vector<double> dts;
    double ref_dt = 0;
    std::vector<int> stages{1, 2, 3, 4};
    bool linear = false;  // closed-form damped rotation instead of the configured PDE
};

struct OrderSummary {
    OrderTable table;
    std::vector<std::string> warnings;
};

/// Writes order.csv and slopes.csv (and order_meta.json) into config.output.directory.
OrderSummary run_order(const ExperimentConfig& config, const OrderRequest& request);

/// Damped rotation parameters used by the linear order study.
struct LinearOracle {
    static constexpr double omega = 1.0;
    static constexpr double gamma = 0.1;
    static constexpr double x0[2] = {1.0, 0.5};
};

/// Convergence table for the damped rotation in extended precision.
OrderTable linear_order_study(double t_end, const std::vector<double>& dts,
                              const std::vector<int>& stages);

// cmd_verify --------------------------------------------------------------------------

struct VerifyCheck {
    std::string name;
    double defect = 0;
    double threshold = 0;
    bool passed() const { return defect <= threshold; }
};

std::vector<VerifyCheck> verify_checks();

}  // namespace eepc
