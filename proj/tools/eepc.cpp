// Command-line front end: run experiments, convergence studies and self-checks.

#include "eepc/csv.hpp"
#include "eepc/experiment.hpp"

#include "CLI11.hpp"

#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw eepc::ConfigError("--dts", "cannot parse '" + item + "'");
        out.push_back(v);
    }
    return out;
}

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> quadrature;
    std::optional<double> tol;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Seed for constant-unequal damping");
        cmd->add_option("--out-dir", out_dir, "Output directory (overrides output.directory)");
        cmd->add_option("--quadrature-q", quadrature, "Gauss-Legendre nodes per step");
        cmd->add_option("--tol", tol, "Fixed-point tolerance");
    }

    void apply(eepc::ExperimentConfig& c) const {
        if (seed) c.damping.seed = *seed;
        if (out_dir) c.output.directory = *out_dir;
        if (quadrature) c.scheme.quadrature_nodes = *quadrature;
        if (tol) c.scheme.tol = *tol;
        eepc::validate(c);
    }
};

eepc::ExperimentConfig linear_default_config() {
    eepc::ExperimentConfig c;
    c.grid.half_length = 1.0;
    c.grid.n1 = 3;
    c.damping = {eepc::DampingKind::ConstantEqual, eepc::LinearOracle::gamma, 0.1, std::nullopt};
    c.time = {1.0, 0.1};
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponential energy-dissipation-preserving collocation integrators"};
    app.require_subcommand(1);

    std::string run_config;
    Overrides run_overrides;
    auto* run = app.add_subcommand("run", "Integrate an experiment and write CSV outputs");
    run->add_option("config", run_config, "Experiment config (JSON)")->required();
    run_overrides.add_to(run);

    std::string order_config;
    std::string dts_text;
    double ref_dt = 0;
    std::vector<int> stages{1, 2, 3, 4};
    bool linear = false;
    Overrides order_overrides;
    auto* order = app.add_subcommand("order", "Temporal convergence study");
    order->add_option("config", order_config, "Experiment config (JSON); optional with --linear");
    order->add_option("--dts", dts_text, "Comma-separated step sizes")->required();
    order->add_option("--ref-dt", ref_dt, "Step of the s=4 reference solution");
    order->add_option("--stages", stages, "Stage counts to study")->delimiter(',');
    order->add_flag("--linear", linear, "Use the closed-form damped rotation oracle");
    order_overrides.add_to(order);

    auto* verify = app.add_subcommand("verify", "Run tableau, operator and symmetry self-checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto config = eepc::load_config(run_config);
            run_overrides.apply(config);
            const auto summary = eepc::run_experiment(config);
            std::cout << "steps " << summary.steps << ", t_final " << eepc::format_number(summary.t_final)
                      << ", iterations/step " << summary.iterations.min << ".." << summary.iterations.max
                      << '\n';
            for (const auto& r : summary.residuals)
                std::cout << "max |R_" << r.name << "| (" << eepc::to_string(r.mode)
                          << ") = " << eepc::format_number(r.max_abs()) << '\n';
            for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
            std::cout << "wrote " << summary.directory.string() << '\n';
            return 0;
        }
        if (*order) {
            eepc::ExperimentConfig config;
            if (!order_config.empty()) {
                config = eepc::load_config(order_config);
            } else if (linear) {
                config = linear_default_config();
            } else {
                throw eepc::ConfigError("config", "required unless --linear is given");
            }
            order_overrides.apply(config);
            eepc::OrderRequest request{parse_list(dts_text), ref_dt, stages, linear};
            const auto summary = eepc::run_order(config, request);
            for (const auto& r : summary.table.rows)
                std::cout << "s=" << r.stages << " dt=" << eepc::format_number(r.dt)
                          << " error=" << eepc::format_number(r.error) << '\n';
            for (const auto& sl : summary.table.slopes)
                if (sl.slope) std::cout << "slope s=" << sl.stages << ": " << std::fixed
                                        << std::setprecision(3) << *sl.slope << std::defaultfloat << '\n';
            for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
            return 0;
        }
        if (*verify) {
            bool ok = true;
            for (const auto& check : eepc::verify_checks()) {
                ok = ok && check.passed();
                std::cout << (check.passed() ? "PASS " : "FAIL ") << check.name
                          << "  defect=" << eepc::format_number(check.defect)
                          << " (<= " << eepc::format_number(check.threshold) << ")\n";
            }
            return ok ? 0 : 1;
        }
    } catch (const eepc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const eepc::NonConvergence& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
