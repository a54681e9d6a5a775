#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subrate/bernstein.hpp"
#include "subrate/config.hpp"
#include "subrate/experiments.hpp"
#include "subrate/version.hpp"

namespace {

using subrate::BernsteinFunction;
using subrate::Config;

BernsteinFunction phi_from_cli(const std::string& config_path, const std::string& family,
                               const std::vector<std::string>& params) {
    if (!config_path.empty())
        return subrate::phi_from_config(Config::parse_file(config_path));
    if (family.empty())
        throw subrate::ConfigError("need --family (with --param k=v) or --config");
    BernsteinFunction::Params p;
    for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw subrate::ConfigError("--param expects key=value, got: " + kv);
        p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return subrate::catalog(family, p);
}

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::uint64_t> streams;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "experiment config file")->required();
    cmd->add_option("--seed", f.seed, "override the config seed");
    cmd->add_option("--out", f.out, "output directory (default: config, then $SUBRATE_OUT)");
    cmd->add_option("--streams", f.streams, "stream id base for Monte Carlo draws");
}

int run_kind(const CommonFlags& f, const std::string& kind) {
    const Config cfg = Config::parse_file(f.config);
    const std::string cfg_kind = cfg.get_string("experiment", "kind");
    if (cfg_kind != kind)
        throw subrate::ConfigError("config kind '" + cfg_kind + "' does not match subcommand '" +
                                   kind + "'");
    subrate::RunOverrides ov;
    ov.seed = f.seed;
    ov.out_dir = f.out;
    ov.streams = f.streams;
    return subrate::run_experiment(cfg, ov);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subrate: moment bounds and convergence rates for subordinated Markov processes"};
    app.set_version_flag("--version", subrate::kVersion);
    app.require_subcommand(1);

    // eval / invert act directly on a Laplace exponent
    std::string eval_config, eval_family;
    std::vector<std::string> eval_params;
    std::vector<double> eval_u;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a catalog Laplace exponent");
    eval_cmd->add_option("--config", eval_config, "config file with a [phi] section");
    eval_cmd->add_option("--family", eval_family, "catalog family name");
    eval_cmd->add_option("--param", eval_params, "family parameter key=value");
    eval_cmd->add_option("--u", eval_u, "evaluation points (> 0)")->required();

    std::string inv_config, inv_family;
    std::vector<std::string> inv_params;
    std::vector<double> inv_v;
    double inv_tol = 1e-10;
    auto* inv_cmd = app.add_subcommand("invert", "invert a catalog Laplace exponent");
    inv_cmd->add_option("--config", inv_config, "config file with a [phi] section");
    inv_cmd->add_option("--family", inv_family, "catalog family name");
    inv_cmd->add_option("--param", inv_params, "family parameter key=value");
    inv_cmd->add_option("--v", inv_v, "target values (> 0)")->required();
    inv_cmd->add_option("--tol", inv_tol, "relative tolerance");

    std::map<std::string, std::pair<CLI::App*, std::string>> runners;
    CommonFlags flags[6];
    const std::pair<const char*, const char*> kinds[6] = {
        {"moment", "moment-sweep"},     {"bound", "bound-check"},
        {"qprocess", "qprocess-rate"},  {"subordinate", "subordinate-rate"},
        {"drift", "drift-check"},       {"props", "property-suite"}};
    for (int i = 0; i < 6; ++i) {
        auto* cmd = app.add_subcommand(kinds[i].first,
                                       std::string("run a ") + kinds[i].second + " experiment");
        add_common(cmd, flags[i]);
        runners[kinds[i].first] = {cmd, kinds[i].second};
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval_cmd->parsed()) {
            BernsteinFunction phi = phi_from_cli(eval_config, eval_family, eval_params);
            for (double u : eval_u) std::printf("%.17g\n", phi(u));
            return 0;
        }
        if (inv_cmd->parsed()) {
            BernsteinFunction phi = phi_from_cli(inv_config, inv_family, inv_params);
            for (double v : inv_v) std::printf("%.17g\n", subrate::invert(phi, v, inv_tol));
            return 0;
        }
        for (int i = 0; i < 6; ++i) {
            auto& [cmd, kind] = runners[kinds[i].first];
            if (cmd->parsed()) return run_kind(flags[i], kind);
        }
    } catch (const subrate::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
