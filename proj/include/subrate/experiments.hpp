#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subrate/bernstein.hpp"
#include "subrate/config.hpp"
#include "subrate/qprocess.hpp"
#include "subrate/subordinators.hpp"

namespace subrate {

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> streams;
};

// Executes the experiment described by cfg: writes the CSV artifacts and a JSON
// summary (fitted exponents, verdicts, seeds, config hash) under the output
// directory.  Returns 0 when every in-config assertion passes, 1 otherwise.
// Invalid configurations throw ConfigError; the CLI maps those to exit 2.
int run_experiment(const Config& cfg, const RunOverrides& ov = {});

// Builders shared with the CLI front-end.
BernsteinFunction phi_from_config(const Config& cfg, const std::string& section = "phi");
SubordinatorSampler sampler_from_config(const Config& cfg, std::uint64_t seed,
                                        const std::string& section = "subordinator");
std::vector<double> grid_from_config(const Config& cfg, const std::string& section = "grid");
QProcessModel model_from_config(const Config& cfg, const std::string& section = "model");

}  // namespace subrate
