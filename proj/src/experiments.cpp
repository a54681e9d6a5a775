#include "subrate/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "subrate/csv.hpp"
#include "subrate/errors.hpp"
#include "subrate/grid.hpp"
#include "subrate/moments.hpp"
#include "subrate/ratecalc.hpp"
#include "subrate/stats.hpp"
#include "subrate/version.hpp"

namespace subrate {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdicts {
    json items = json::array();
    bool all_pass = true;

    void add(const std::string& name, bool pass, const std::string& detail) {
        items.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
        all_pass = all_pass && pass;
    }
};

struct RunContext {
    std::string kind;
    std::string prefix;
    std::filesystem::path out_dir;
    std::uint64_t seed = 1;
    std::uint64_t streams = 1;
    json fitted = json::object();
    json files = json::array();
    Verdicts verdicts;

    std::string path(const std::string& suffix) {
        const std::string p = (out_dir / (prefix + suffix)).string();
        files.push_back(p);
        return p;
    }
};

RunContext make_context(const Config& cfg, const RunOverrides& ov) {
    RunContext ctx;
    ctx.kind = cfg.get_string("experiment", "kind");
    ctx.prefix = cfg.get_string("experiment", "name", ctx.kind);
    std::string out = cfg.get_string("experiment", "out", "");
    if (ov.out_dir) out = *ov.out_dir;
    if (out.empty()) {
        if (const char* env = std::getenv("SUBRATE_OUT")) out = env;
    }
    if (out.empty()) out = ".";
    ctx.out_dir = out;
    std::filesystem::create_directories(ctx.out_dir);
    ctx.seed = ov.seed ? *ov.seed : cfg.get_u64("experiment", "seed", 1);
    ctx.streams = ov.streams ? *ov.streams : cfg.get_u64("experiment", "streams", 1);
    return ctx;
}

int finish(const Config& cfg, RunContext& ctx) {
    json summary;
    summary["kind"] = ctx.kind;
    summary["config_hash"] = cfg.hash();
    summary["seed"] = ctx.seed;
    summary["streams"] = ctx.streams;
    summary["version"] = kVersion;
    summary["csv_schema_version"] = kCsvSchemaVersion;
    summary["verdicts"] = ctx.verdicts.items;
    summary["fitted"] = ctx.fitted;
    summary["files"] = ctx.files;
    summary["pass"] = ctx.verdicts.all_pass;
    std::ofstream out(ctx.out_dir / (ctx.prefix + "_summary.json"), std::ios::binary);
    out << summary.dump(2) << '\n';
    return ctx.verdicts.all_pass ? 0 : 1;
}

std::string fmt(double v) { return CsvWriter::format(v); }

}  // namespace

BernsteinFunction phi_from_config(const Config& cfg, const std::string& section) {
    if (!cfg.has_section(section)) throw ConfigError("missing [" + section + "] section");
    const std::string family = cfg.get_string(section, "family");
    try {
        return catalog(family, cfg.numeric_params(section, {"family"}));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad [") + section + "]: " + e.what());
    }
}

SubordinatorSampler sampler_from_config(const Config& cfg, std::uint64_t seed,
                                        const std::string& section) {
    if (!cfg.has_section(section)) throw ConfigError("missing [" + section + "] section");
    const std::string family = cfg.get_string(section, "family");
    try {
        if (family == "stable") {
            const double alpha = cfg.get_double(section, "alpha");
            if (cfg.has(section, "levy_c"))
                return SubordinatorSampler::stable_from_levy(alpha,
                                                             cfg.get_double(section, "levy_c"),
                                                             seed);
            return SubordinatorSampler::stable(alpha, cfg.get_double(section, "scale", 1.0), seed);
        }
        if (family == "gamma")
            return SubordinatorSampler::gamma(cfg.get_double(section, "a", 1.0),
                                              cfg.get_double(section, "b", 1.0), seed);
        if (family == "compound-poisson-drift") {
            JumpDistribution jump =
                cfg.has(section, "jump_rate")
                    ? JumpDistribution::exponential(cfg.get_double(section, "jump_rate"))
                    : JumpDistribution::fixed(cfg.get_double(section, "jump", 1.0));
            return SubordinatorSampler::compound_poisson_drift(
                cfg.get_double(section, "drift", 0.0), cfg.get_double(section, "rate", 0.0), jump,
                seed);
        }
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad [") + section + "]: " + e.what());
    }
    throw ConfigError("unknown subordinator family: " + family);
}

std::vector<double> grid_from_config(const Config& cfg, const std::string& section) {
    std::vector<double> g;
    if (cfg.has(section, "values")) {
        g = cfg.get_list(section, "values");
    } else {
        const double lo = cfg.get_double(section, "lo");
        const double hi = cfg.get_double(section, "hi");
        const std::size_t n = static_cast<std::size_t>(cfg.get_double(section, "points", 9));
        const std::string spacing = cfg.get_string(section, "spacing", "log");
        if (n < 1) throw ConfigError("grid: points must be >= 1");
        if (n == 1) {
            g = {lo};
        } else if (spacing == "log") {
            g = geometric_grid(lo, hi, n);
        } else if (spacing == "linear") {
            g = linear_grid(lo, hi, n);
        } else {
            throw ConfigError("grid: spacing must be log or linear");
        }
    }
    if (g.empty()) throw ConfigError("grid: empty t grid");
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1])) throw ConfigError("grid: t grid must be strictly increasing");
    return g;
}

QProcessModel model_from_config(const Config& cfg, const std::string& section) {
    if (!cfg.has_section(section)) throw ConfigError("missing [" + section + "] section");
    const std::size_t N = static_cast<std::size_t>(cfg.get_double(section, "N", 200));
    const double lambda0 = cfg.get_double(section, "lambda0", 1.0);
    const std::string lrule = cfg.get_string(section, "lambda_rule", "inverse-index");
    const double lparam = cfg.get_double(section, "lambda_param", 1.0);
    const std::string prule = cfg.get_string(section, "p_rule", "geometric");
    const double pparam = cfg.get_double(section, "p_param", prule == "geometric" ? 0.5 : 4.0);

    auto lambda_rule = [&](std::size_t i) -> double {
        if (i == 0) return lambda0;
        if (lrule == "inverse-index") return 1.0 / static_cast<double>(i);
        if (lrule == "constant") return lparam;
        if (lrule == "power") return std::pow(static_cast<double>(i), -lparam);
        throw ConfigError("model: lambda_rule must be inverse-index, constant or power");
    };
    auto p_rule = [&](std::size_t i) -> double {
        if (prule == "geometric") return std::pow(pparam, static_cast<double>(i));
        if (prule == "power") return std::pow(static_cast<double>(i), -pparam);
        throw ConfigError("model: p_rule must be geometric or power");
    };
    try {
        return QProcessModel::build(lambda_rule, p_rule, N);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad [") + section + "]: " + e.what());
    }
}

namespace {

ControlCase control_case_from(const Config& cfg) {
    const std::string c = cfg.get_string("control", "case", "b");
    if (c == "a") return ControlCase::a;
    if (c == "b") return ControlCase::b;
    if (c == "c") return ControlCase::c;
    throw ConfigError("control: case must be a, b or c");
}

ControlParams control_params_from(const Config& cfg) {
    ControlParams p;
    p.theta = cfg.get_double("control", "theta", 1.0);
    p.q = cfg.get_double("control", "q", 0.5);
    p.beta = cfg.get_double("control", "beta", 0.0);
    p.gamma = cfg.get_double("control", "gamma", 0.0);
    return p;
}

RateFunction source_rate_from_case(ControlCase cse, const ControlParams& p) {
    switch (cse) {
        case ControlCase::a:
            return RateFunction::sub_exponential(2.0 * p.theta * p.q, 0.5);
        case ControlCase::b:
            return RateFunction::algebraic(p.beta);
        case ControlCase::c:
            return RateFunction::logarithmic(p.gamma);
    }
    throw ConfigError("control: bad case");
}

RateFunction::Family fit_family_from_case(ControlCase cse) {
    switch (cse) {
        case ControlCase::a:
            return RateFunction::Family::sub_exponential;
        case ControlCase::b:
            return RateFunction::Family::algebraic;
        case ControlCase::c:
            return RateFunction::Family::logarithmic;
    }
    throw ConfigError("control: bad case");
}

std::size_t mc_n(const Config& cfg, const std::string& section, std::size_t fallback) {
    const auto n = static_cast<std::size_t>(cfg.get_double(section, "n", static_cast<double>(fallback)));
    if (n < 1000) throw ConfigError("n must be >= 1000 for Monte Carlo experiments");
    return n;
}

// --------------------------------------------------------------------------
// moment-sweep
// --------------------------------------------------------------------------

int run_moment_sweep(const Config& cfg, RunContext& ctx) {
    const std::string type = cfg.get_string("moment", "type");
    const std::vector<double> grid = grid_from_config(cfg);
    const std::vector<std::string> cols = {"t",        "value",     "error",    "bound_low",
                                           "bound_high", "log_value", "log_error"};
    CsvWriter csv(ctx.path(".csv"), cols);

    if (type == "neg") {
        const double beta = cfg.get_double("moment", "beta");
        BernsteinFunction phi = phi_from_config(cfg);
        std::optional<SubordinatorSampler> sampler;
        std::size_t n = 0;
        if (cfg.has_section("subordinator")) {
            sampler = sampler_from_config(cfg, ctx.seed);
            n = mc_n(cfg, "moment", 100000);
        }
        bool lower_ok = true, agree_ok = true;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double t = grid[k];
            double quad = kInf, quad_err = 0.0;
            bool diverged = false;
            try {
                MomentEstimate q = neg_moment_quadrature(phi, beta, t);
                quad = q.value;
                quad_err = q.error;
            } catch (const DivergenceError&) {
                diverged = true;
            }
            const double low = neg_moment_lower_bound(phi, beta, t);
            if (!diverged && low > quad) lower_ok = false;
            double value = quad, err = quad_err, bh = kNaN;
            if (sampler) {
                MomentEstimate mc = neg_moment_mc(*sampler, beta, t, n, ctx.streams + k);
                value = mc.value;
                err = mc.error;
                bh = diverged ? kInf : quad;
                if (!diverged && std::fabs(mc.value - quad) > 4.0 * mc.error) agree_ok = false;
            }
            csv.row(std::vector<double>{t, value, err, low, bh,
                                        value > 0 ? std::log(value) : -kInf,
                                        err > 0 ? std::log(err) : -kInf});
        }
        ctx.verdicts.add("neg_moment_lower_bound_holds", lower_ok,
                         "closed-form lower bound <= quadrature at every grid point");
        if (sampler)
            ctx.verdicts.add("mc_quadrature_agree_4se", agree_ok,
                             "Monte Carlo within 4 standard errors of quadrature");
        return finish(cfg, ctx);
    }

    if (type == "subexp") {
        const double theta = cfg.get_double("moment", "theta");
        const double delta = cfg.get_double("moment", "delta");
        SubordinatorSampler sampler = sampler_from_config(cfg, ctx.seed);
        const std::size_t n = mc_n(cfg, "moment", 100000);
        std::optional<OdeBoundKit> kit;
        if (sampler.family() == Family::stable) {
            const auto& p = sampler.phi().params();
            kit = build_ode_kit(theta, delta, p.at("levy_c"), p.at("alpha"));
        }
        bool below = true;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double t = grid[k];
            MomentEstimate mc = subexp_moment_mc(sampler, theta, delta, t, n, ctx.streams + k);
            double bound = kNaN;
            if (kit) {
                const double lb = log_subexp_bound_ode(*kit, t);
                bound = std::exp(lb);
                if (mc.log_value > log_sum_exp(lb, std::log(4.0) + mc.log_error)) below = false;
            }
            csv.row(std::vector<double>{t, mc.value, mc.error, kNaN, bound, mc.log_value,
                                        mc.log_error});
        }
        if (kit)
            ctx.verdicts.add("mc_below_ode_bound", below,
                             "Monte Carlo estimate <= ODE-comparison bound + 4 SE (log domain)");
        return finish(cfg, ctx);
    }

    if (type == "log") {
        const double gamma = cfg.get_double("moment", "gamma");
        SubordinatorSampler sampler = sampler_from_config(cfg, ctx.seed);
        const std::size_t n = mc_n(cfg, "moment", 100000);
        const bool stable = sampler.family() == Family::stable;
        double elog = kNaN, alpha = kNaN;
        if (stable) {
            alpha = sampler.phi().params().at("alpha");
            SampleBatch b1 = sampler.sample(1.0, n, 999999);
            MeanSe m = blocked_mean_se(Exec::parallel, n, [&](std::size_t i) {
                return std::log1p(b1.values[i]);
            });
            elog = m.mean;
        }
        std::vector<double> values, shapes;
        bool lower_ok = true;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double t = grid[k];
            MomentEstimate mc = log_moment_mc(sampler, gamma, t, n, ctx.streams + k);
            double low = kNaN;
            double shape = kNaN;
            if (stable) {
                low = log_moment_lower(gamma, alpha, t, elog);
                shape = std::pow(std::log1p(std::pow(t, 1.0 / alpha)), -gamma);
                if (low > mc.value + 4.0 * mc.error) lower_ok = false;
                shapes.push_back(shape);
            }
            values.push_back(mc.value);
            csv.row(std::vector<double>{t, mc.value, mc.error, low, kNaN, mc.log_value,
                                        mc.log_error});
        }
        if (stable) {
            double cmax = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i)
                cmax = std::max(cmax, values[i] / shapes[i]);
            ctx.fitted["log_moment_envelope_C"] = cmax;
            ctx.verdicts.add("log_moment_lower_holds", lower_ok,
                             "closed-form lower bound <= MC + 4 SE at every grid point");
        }
        return finish(cfg, ctx);
    }

    if (type == "rate-transfer") {
        SubordinatorSampler sampler = sampler_from_config(cfg, ctx.seed);
        const std::size_t n = mc_n(cfg, "moment", 100000);
        const std::string fam = cfg.get_string("rate", "family");
        RateFunction r = fam == "sub-exponential"
                             ? RateFunction::sub_exponential(cfg.get_double("rate", "theta"),
                                                             cfg.get_double("rate", "delta"))
                         : fam == "algebraic"
                             ? RateFunction::algebraic(cfg.get_double("rate", "beta"))
                         : fam == "logarithmic"
                             ? RateFunction::logarithmic(cfg.get_double("rate", "gamma"))
                             : throw ConfigError("rate: family must be sub-exponential, "
                                                 "algebraic or logarithmic");
        bool monotone = true;
        double prev = kInf, prev_se = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double t = grid[k];
            MomentEstimate mc = rate_subordinate(r, sampler, t, n, ctx.streams + k);
            if (mc.value > prev + 3.0 * (mc.error + prev_se)) monotone = false;
            prev = mc.value;
            prev_se = mc.error;
            csv.row(std::vector<double>{t, mc.value, mc.error, kNaN, kNaN, mc.log_value,
                                        mc.log_error});
        }
        ctx.verdicts.add("transfer_monotone", monotone,
                         "transferred rate non-increasing along the sweep (3 SE band)");
        return finish(cfg, ctx);
    }

    throw ConfigError("moment: type must be neg, subexp, log or rate-transfer");
}

// --------------------------------------------------------------------------
// bound-check
// --------------------------------------------------------------------------

int run_bound_check(const Config& cfg, RunContext& ctx) {
    BernsteinFunction phi = phi_from_config(cfg);
    const double beta = cfg.get_double("moment", "beta", 0.5);
    const std::vector<double> grid = grid_from_config(cfg);
    CsvWriter csv(ctx.path(".csv"), {"t", "lower_bound", "quadrature", "margin"});
    bool ok = true;
    for (double t : grid) {
        const double low = neg_moment_lower_bound(phi, beta, t);
        double quad = kInf;
        try {
            quad = neg_moment_quadrature(phi, beta, t).value;
        } catch (const DivergenceError&) {
            // infinite moment satisfies the lower bound trivially
        }
        if (low > quad) ok = false;
        csv.row(std::vector<double>{t, low, quad, quad - low});
    }
    ctx.verdicts.add("neg_moment_lower_bound_holds", ok,
                     "lower bound <= quadrature (divergent = +inf) at every grid point");
    if (cfg.has_section("subexp")) {
        const double theta = cfg.get_double("subexp", "theta");
        const double delta = cfg.get_double("subexp", "delta");
        const double c = cfg.get_double("subexp", "c");
        const double alpha = cfg.get_double("subexp", "alpha");
        OdeBoundKit kit = build_ode_kit(theta, delta, c, alpha);
        bool chain = true;
        for (double t : grid) {
            const double lode = log_subexp_bound_ode(kit, t);
            const double lclosed = log_subexp_bound_closed(theta, delta, c, alpha, t);
            if (lclosed < lode - 1e-12) chain = false;
        }
        ctx.verdicts.add("subexp_chain_closed_above_ode", chain,
                         "closed-form bound >= ODE bound along the grid");
    }
    return finish(cfg, ctx);
}

// --------------------------------------------------------------------------
// qprocess-rate / subordinate-rate
// --------------------------------------------------------------------------

int run_qprocess_rate(const Config& cfg, RunContext& ctx, bool subordinated) {
    QProcessModel model = model_from_config(cfg);
    const ControlCase cse = control_case_from(cfg);
    const ControlParams cp = control_params_from(cfg);
    ControlFunction control = control_function(cse, cp, model);
    const std::size_t x = static_cast<std::size_t>(cfg.get_double("model", "start_state", 0));
    const std::vector<double> grid = grid_from_config(cfg);

    std::optional<SubordinatorSampler> sampler;
    std::size_t n = 0;
    if (subordinated) {
        sampler = sampler_from_config(cfg, ctx.seed);
        n = mc_n(cfg, "mc", 10000);
    }
    DistanceCurve curve = distance_sweep(model, sampler ? &*sampler : nullptr, control.f, x, grid,
                                         n, ctx.streams);

    // rate prediction: the source-rate family for the plain semigroup, its
    // transferred counterpart for the subordinated one
    std::vector<double> pred(grid.size());
    if (subordinated) {
        TransferParams tp;
        tp.beta = cp.beta;
        tp.gamma = cp.gamma;
        tp.theta = cp.theta;
        tp.delta = 0.5;
        TransferCase tc = cse == ControlCase::a   ? TransferCase::a
                         : cse == ControlCase::b ? TransferCase::b
                                                 : TransferCase::c;
        if (tc == TransferCase::a) {
            const auto& pp = sampler->phi().params();
            tp.alpha = pp.at("alpha");
            tp.c = pp.at("levy_c");
        }
        for (std::size_t i = 0; i < grid.size(); ++i)
            pred[i] = transferred_rate(tc, tp, &sampler->phi(), grid[i], 1.0);
    } else {
        RateFunction r = source_rate_from_case(cse, cp);
        for (std::size_t i = 0; i < grid.size(); ++i) pred[i] = r(grid[i]);
    }
    double fitted_C = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (pred[i] > 0.0) fitted_C = std::max(fitted_C, curve.distances[i] / pred[i]);

    CsvWriter csv(ctx.path(".csv"), {"t", "distance", "se", "rate_prediction", "fitted_C"});
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv.row(std::vector<double>{grid[i], curve.distances[i], curve.se[i], pred[i], fitted_C});

    ctx.fitted["envelope_C"] = fitted_C;
    ctx.fitted["summability_truncated"] = control.truncated_summability;

    bool envelope = true;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (curve.distances[i] > fitted_C * pred[i] * (1.0 + 1e-12)) envelope = false;
    ctx.verdicts.add("transfer_envelope_holds", envelope,
                     "distance <= fitted_C * predicted rate at every grid point");

    if (grid.size() >= 6) {
        try {
            RateFitResult fit = rate_fit(curve, fit_family_from_case(cse));
            ctx.fitted["exponent"] = fit.exponent;
            ctx.fitted["fit_residual"] = fit.residual;
            if (cfg.has("fit", "expected")) {
                const double expected = cfg.get_double("fit", "expected");
                const double tol = cfg.get_double("fit", "tol", 0.2);
                const bool ok = std::fabs(fit.exponent - expected) <= tol * std::fabs(expected);
                ctx.verdicts.add("fitted_exponent_within_tol", ok,
                                 "fitted " + fmt(fit.exponent) + " vs expected " + fmt(expected) +
                                     " (rel tol " + fmt(tol) + ")");
            }
        } catch (const FitError& e) {
            ctx.verdicts.add("rate_fit", false, e.what());
        }
    }
    if (!subordinated) {
        bool monotone = true;
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (curve.distances[i] > curve.distances[i - 1] + 1e-10) monotone = false;
        ctx.verdicts.add("distance_monotone", monotone,
                         "exact semigroup distance non-increasing along the grid");
    }
    return finish(cfg, ctx);
}

// --------------------------------------------------------------------------
// drift-check
// --------------------------------------------------------------------------

int run_drift_check(const Config& cfg, RunContext& ctx) {
    const std::string preset = cfg.get_string("drift", "preset", "ou");
    LyapunovSpec1D spec;
    if (preset == "ou" || preset == "linear") {
        const double k = cfg.get_double("drift", "k", 1.0);
        const double s = cfg.get_double("drift", "sigma", std::sqrt(2.0));
        spec.drift_b = [k](double x) { return -k * x; };
        spec.sigma = [s](double) { return s; };
    } else {
        throw ConfigError("drift: preset must be ou or linear");
    }
    const double vpow = cfg.get_double("drift", "v_power", 1.0);
    spec.V = [vpow](double x) { return std::pow(1.0 + x * x, vpow); };
    if (vpow == 1.0) {
        spec.V1 = [](double x) { return 2.0 * x; };
        spec.V2 = [](double) { return 2.0; };
    }
    spec.petite_radius = cfg.get_double("drift", "M", 2.0);
    spec.b_const = cfg.get_double("drift", "b_const", 4.0);
    spec.q = cfg.get_double("drift", "q", 0.5);

    const std::string dfam = cfg.get_string("driver", "family", "power");
    ConcaveRateDriver driver =
        dfam == "power"
            ? ConcaveRateDriver::power(cfg.get_double("driver", "c1", 1.0),
                                       cfg.get_double("driver", "kappa", 0.5))
        : dfam == "log-damped"
            ? ConcaveRateDriver::log_damped(cfg.get_double("driver", "c1", 1.0),
                                            cfg.get_double("driver", "p", 1.0))
            : throw ConfigError("driver: family must be power or log-damped");

    const double L = cfg.get_double("drift", "grid_halfwidth", 10.0);
    const std::size_t pts = static_cast<std::size_t>(cfg.get_double("drift", "grid_points", 401));
    const std::vector<double> grid = linear_grid(-L, L, pts);

    DriftReport rep = drift_inequality_check(spec, driver, grid);
    CsvWriter csv(ctx.path(".csv"), {"x", "lhs", "rhs", "margin"});
    for (double x : grid) {
        const double lhs = generator_apply_1d(spec, x);
        const double rhs = -driver(spec.V(x)) + (std::fabs(x) <= spec.petite_radius ? spec.b_const : 0.0);
        csv.row(std::vector<double>{x, lhs, rhs, rhs - lhs});
    }
    ctx.fitted["worst_margin"] = rep.worst_margin;
    ctx.verdicts.add("drift_inequality_holds", rep.pass,
                     rep.pass ? "no violations on the grid"
                              : std::to_string(rep.violating_x.size()) + " violating grid points");

    if (cfg.has_section("rategrid")) {
        const std::vector<double> tg = grid_from_config(cfg, "rategrid");
        CsvWriter rcsv(ctx.path("_rate.csv"), {"t", "rate", "log_rate"});
        for (double t : tg) {
            const double lr = log_drift_rate(driver, spec.q, t);
            rcsv.row(std::vector<double>{t, std::exp(lr), lr});
        }
    }
    return finish(cfg, ctx);
}

// --------------------------------------------------------------------------
// property-suite
// --------------------------------------------------------------------------

int run_property_suite(const Config& cfg, RunContext& ctx) {
    std::vector<double> taus = {1.0, 1.5, 2.0, 4.0};
    std::vector<double> alphas = {0.1, 0.3, 0.5, 0.7, 0.9};
    if (cfg.has("props", "tau")) taus = cfg.get_list("props", "tau");
    if (cfg.has("props", "alpha")) alphas = cfg.get_list("props", "alpha");
    const std::size_t gpts = static_cast<std::size_t>(cfg.get_double("props", "grid_points", 1000));
    const std::size_t fuzz = static_cast<std::size_t>(cfg.get_double("props", "fuzz_count", 100000));

    const std::vector<double> grid = geometric_grid(1e-6, 1.0 - 1e-3, gpts);
    CsvWriter csv(ctx.path(".csv"), {"tau", "alpha", "min_first_diff", "min_second_diff", "pass"});
    bool a1 = true;
    for (double tau : taus)
        for (double alpha : alphas) {
            const ConvexityReport rep = appendix_g_check(tau, alpha, grid);
            a1 = a1 && rep.pass;
            csv.row(std::vector<double>{tau, alpha, rep.min_first_difference,
                                        rep.min_second_difference, rep.pass ? 1.0 : 0.0});
        }
    ctx.verdicts.add("convexity_grid_pass", a1,
                     "monotone/convex witness on every (tau, alpha) grid");

    std::size_t bad_a2 = 0;
    for (std::size_t i = 0; i < fuzz; ++i) {
        CounterRng rng(ctx.seed, 7001, i);
        const double tau = rng.next_unit();
        const double xx = rng.next_unit() * 1e6;
        if (!log_product_inequality_check(tau, xx)) ++bad_a2;
    }
    ctx.verdicts.add("log_product_inequality", bad_a2 == 0,
                     std::to_string(bad_a2) + " violations in " + std::to_string(fuzz) + " trials");

    std::size_t bad_efds = 0;
    for (std::size_t i = 0; i < fuzz; ++i) {
        CounterRng rng(ctx.seed, 7002, i);
        const double lambda = rng.next_unit() * 1e6 + 1e-9;
        const double xx = rng.next_unit() * lambda;
        if (!(xx > 0.0) || xx >= lambda) continue;
        if (!log_ratio_decreasing_check(xx, lambda)) ++bad_efds;
    }
    ctx.verdicts.add("log_ratio_strictly_decreasing", bad_efds == 0,
                     std::to_string(bad_efds) + " violations in " + std::to_string(fuzz) +
                         " trials");
    return finish(cfg, ctx);
}

}  // namespace

int run_experiment(const Config& cfg, const RunOverrides& ov) {
    RunContext ctx = make_context(cfg, ov);
    const std::string kind = ctx.kind;
    if (kind == "moment-sweep") return run_moment_sweep(cfg, ctx);
    if (kind == "bound-check") return run_bound_check(cfg, ctx);
    if (kind == "qprocess-rate") return run_qprocess_rate(cfg, ctx, false);
    if (kind == "subordinate-rate") return run_qprocess_rate(cfg, ctx, true);
    if (kind == "drift-check") return run_drift_check(cfg, ctx);
    if (kind == "property-suite") return run_property_suite(cfg, ctx);
    throw ConfigError("unknown experiment kind: " + kind);
}

}  // namespace subrate
