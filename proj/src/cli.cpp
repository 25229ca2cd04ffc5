#include "sigsde/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "sigsde/expected_signature.hpp"
#include "sigsde/serialization.hpp"
#include "sigsde/tensor_ops.hpp"

namespace sigsde {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
    if (!j.is_object()) throw ConfigError(context + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || key == k;
        if (!known) throw ConfigError(context + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read_into(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

std::vector<double> read_grid(const json& j, const char* key,
                              const std::vector<double>& fallback,
                              const std::string& context) {
    if (!j.contains(key)) return fallback;
    auto grid = j.at(key).get<std::vector<double>>();
    if (grid.empty()) throw ConfigError(context + "." + key + ": empty grid");
    return grid;
}

// per-purpose seed derivation, recorded in the manifests
std::uint64_t seed_for(const RunConfig& config, const char* purpose) {
    std::uint64_t h = splitmix64(config.seed);
    for (const char* p = purpose; *p; ++p) h = splitmix64(h ^ static_cast<std::uint64_t>(*p));
    return h;
}

std::string out_path(const RunConfig& config, const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
}

void ensure_out_dir(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + config.out_dir);
}

std::string payoff_file_name(const std::string& set, std::size_t index) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "payoff_%s_%04zu.json", set.c_str(), index);
    return buffer;
}

json load_json_file(const std::string& path, const char* context) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const std::exception& e) {
        throw ConfigError(std::string(context) + ": " + e.what());
    }
    return j;
}

BsModel market_model(const RunConfig& config) {
    return BsModel(config.market_sigma, config.x0);
}

int effective_algebra_order(const RunConfig& config) {
    return config.optimizer.algebra_order > 0 ? config.optimizer.algebra_order
                                              : default_algebra_order(config.model_order);
}

std::vector<DiscretePath> reference_paths(const RunConfig& config) {
    const auto grid = uniform_grid(config.horizon, config.grid_steps);
    const std::uint64_t seed = seed_for(config, "fit-paths");
    std::vector<DiscretePath> paths;
    paths.reserve(config.fit_paths);
    if (config.fit_reference == "black_scholes") {
        const BsModel model = market_model(config);
        for (std::size_t i = 0; i < config.fit_paths; ++i) {
            RngStream rng = RngStream::substream(seed, i);
            paths.push_back(bs_simulate(model, grid, rng));
        }
    } else if (config.fit_reference == "sig_sde") {
        if (config.fit_params_file.empty())
            throw ConfigError("payoff_fit.reference = sig_sde needs payoff_fit.params_file");
        SigSdeParams params =
            params_from_json(load_json_file(config.fit_params_file, "payoff_fit.params_file"));
        for (std::size_t i = 0; i < config.fit_paths; ++i) {
            RngStream rng = RngStream::substream(seed, i);
            paths.push_back(simulate(params, grid, rng));
        }
    } else {
        throw ConfigError("payoff_fit.reference must be black_scholes or sig_sde");
    }
    return paths;
}

std::vector<MarketInstrument> load_instruments(const RunConfig& config, const std::string& name) {
    const std::string path = out_path(config, name);
    try {
        return instruments_from_csv(read_text_file(path));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("cannot load ") + name + ": " + e.what());
    }
}

std::vector<SignaturePayoff> load_payoffs(const RunConfig& config, const std::string& set,
                                          std::size_t count) {
    std::vector<SignaturePayoff> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::string path = out_path(config, payoff_file_name(set, i));
        out.push_back(payoff_from_json(load_json_file(path, "payoff file")));
    }
    return out;
}

} // namespace

RunConfig config_from_json_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    check_keys(j,
               {"schema_version", "seed", "model", "grid", "market", "payoff_fit", "calibration",
                "pricing", "simulate", "io"},
               "config");

    RunConfig config;
    read_into(j, "schema_version", config.schema_version);
    if (config.schema_version != 1)
        throw ConfigError("config: unsupported schema_version " +
                          std::to_string(config.schema_version));
    read_into(j, "seed", config.seed);

    if (j.contains("model")) {
        const json& m = j.at("model");
        check_keys(m, {"N", "x0", "T"}, "config.model");
        read_into(m, "N", config.model_order);
        read_into(m, "x0", config.x0);
        read_into(m, "T", config.horizon);
        if (config.model_order < 1 || config.model_order > 8)
            throw ConfigError("config.model.N must be in 1..8");
        if (!(config.x0 > 0.0)) throw ConfigError("config.model.x0 must be positive");
        if (!(config.horizon > 0.0)) throw ConfigError("config.model.T must be positive");
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        check_keys(g, {"steps"}, "config.grid");
        read_into(g, "steps", config.grid_steps);
        if (config.grid_steps < 1) throw ConfigError("config.grid.steps must be >= 1");
    }
    if (j.contains("market")) {
        const json& m = j.at("market");
        check_keys(m, {"sigma", "mc_paths", "vanilla", "variance", "barrier_out", "barrier_in"},
                   "config.market");
        read_into(m, "sigma", config.market_sigma);
        read_into(m, "mc_paths", config.market_mc_paths);
        if (!(config.market_sigma > 0.0)) throw ConfigError("config.market.sigma must be > 0");
        auto& grids = config.grids;
        if (m.contains("vanilla")) {
            const json& v = m.at("vanilla");
            check_keys(v, {"strikes", "maturities"}, "config.market.vanilla");
            grids.vanilla_strikes =
                read_grid(v, "strikes", grids.vanilla_strikes, "config.market.vanilla");
            grids.vanilla_maturities =
                read_grid(v, "maturities", grids.vanilla_maturities, "config.market.vanilla");
        }
        if (m.contains("variance")) {
            const json& v = m.at("variance");
            check_keys(v, {"strikes", "maturities"}, "config.market.variance");
            grids.variance_strikes =
                read_grid(v, "strikes", grids.variance_strikes, "config.market.variance");
            grids.variance_maturities =
                read_grid(v, "maturities", grids.variance_maturities, "config.market.variance");
        }
        if (m.contains("barrier_out")) {
            const json& v = m.at("barrier_out");
            check_keys(v, {"strikes", "levels", "maturity"}, "config.market.barrier_out");
            grids.barrier_out_strikes =
                read_grid(v, "strikes", grids.barrier_out_strikes, "config.market.barrier_out");
            grids.barrier_out_levels =
                read_grid(v, "levels", grids.barrier_out_levels, "config.market.barrier_out");
            read_into(v, "maturity", grids.barrier_out_maturity);
        }
        if (m.contains("barrier_in")) {
            const json& v = m.at("barrier_in");
            check_keys(v, {"strikes", "levels", "maturity"}, "config.market.barrier_in");
            grids.barrier_in_strikes =
                read_grid(v, "strikes", grids.barrier_in_strikes, "config.market.barrier_in");
            grids.barrier_in_levels =
                read_grid(v, "levels", grids.barrier_in_levels, "config.market.barrier_in");
            read_into(v, "maturity", grids.barrier_in_maturity);
        }
    }
    if (j.contains("payoff_fit")) {
        const json& p = j.at("payoff_fit");
        check_keys(p, {"order", "paths", "ridge", "reference", "params_file"},
                   "config.payoff_fit");
        read_into(p, "order", config.payoff_order);
        read_into(p, "paths", config.fit_paths);
        read_into(p, "ridge", config.ridge);
        read_into(p, "reference", config.fit_reference);
        read_into(p, "params_file", config.fit_params_file);
        if (config.payoff_order < 0 || config.payoff_order > 8)
            throw ConfigError("config.payoff_fit.order must be in 0..8");
    }
    if (j.contains("calibration")) {
        const json& c = j.at("calibration");
        check_keys(c,
                   {"starts", "max_iterations", "tol_gradient", "tol_step", "seed",
                    "algebra_order", "analytic_jacobian", "fd_step", "start_perturbation",
                    "weights"},
                   "config.calibration");
        read_into(c, "starts", config.optimizer.starts);
        read_into(c, "max_iterations", config.optimizer.max_iterations);
        read_into(c, "tol_gradient", config.optimizer.tol_gradient);
        read_into(c, "tol_step", config.optimizer.tol_step);
        read_into(c, "algebra_order", config.optimizer.algebra_order);
        read_into(c, "analytic_jacobian", config.optimizer.analytic_jacobian);
        read_into(c, "fd_step", config.optimizer.fd_step);
        read_into(c, "start_perturbation", config.optimizer.start_perturbation);
        read_into(c, "weights", config.weights);
        if (c.contains("seed")) config.optimizer.seed = c.at("seed").get<std::uint64_t>();
        if (config.optimizer.starts < 1)
            throw ConfigError("config.calibration.starts must be >= 1");
    }
    if (j.contains("pricing")) {
        const json& p = j.at("pricing");
        check_keys(p, {"mc_paths", "with_mc"}, "config.pricing");
        read_into(p, "mc_paths", config.price_mc_paths);
        read_into(p, "with_mc", config.price_with_mc);
    }
    if (j.contains("simulate")) {
        const json& s = j.at("simulate");
        check_keys(s, {"paths", "params_file"}, "config.simulate");
        read_into(s, "paths", config.simulate_paths);
        read_into(s, "params_file", config.simulate_params_file);
        if (config.simulate_paths < 1)
            throw ConfigError("config.simulate.paths must be >= 1");
    }
    if (j.contains("io")) {
        const json& io = j.at("io");
        check_keys(io, {"out_dir"}, "config.io");
        read_into(io, "out_dir", config.out_dir);
        if (config.out_dir.empty()) throw ConfigError("config.io.out_dir must not be empty");
    }
    return config;
}

std::string config_to_json_text(const RunConfig& config) {
    json j;
    j["schema_version"] = config.schema_version;
    j["seed"] = config.seed;
    j["model"] = {{"N", config.model_order}, {"x0", config.x0}, {"T", config.horizon}};
    j["grid"] = {{"steps", config.grid_steps}};
    j["market"] = {{"sigma", config.market_sigma},
                   {"mc_paths", config.market_mc_paths},
                   {"vanilla",
                    {{"strikes", config.grids.vanilla_strikes},
                     {"maturities", config.grids.vanilla_maturities}}},
                   {"variance",
                    {{"strikes", config.grids.variance_strikes},
                     {"maturities", config.grids.variance_maturities}}},
                   {"barrier_out",
                    {{"strikes", config.grids.barrier_out_strikes},
                     {"levels", config.grids.barrier_out_levels},
                     {"maturity", config.grids.barrier_out_maturity}}},
                   {"barrier_in",
                    {{"strikes", config.grids.barrier_in_strikes},
                     {"levels", config.grids.barrier_in_levels},
                     {"maturity", config.grids.barrier_in_maturity}}}};
    j["payoff_fit"] = {{"order", config.payoff_order},
                       {"paths", config.fit_paths},
                       {"ridge", config.ridge},
                       {"reference", config.fit_reference},
                       {"params_file", config.fit_params_file}};
    j["calibration"] = {{"starts", config.optimizer.starts},
                        {"max_iterations", config.optimizer.max_iterations},
                        {"tol_gradient", config.optimizer.tol_gradient},
                        {"tol_step", config.optimizer.tol_step},
                        {"seed", config.optimizer.seed},
                        {"algebra_order", config.optimizer.algebra_order},
                        {"analytic_jacobian", config.optimizer.analytic_jacobian},
                        {"fd_step", config.optimizer.fd_step},
                        {"start_perturbation", config.optimizer.start_perturbation},
                        {"weights", config.weights}};
    j["pricing"] = {{"mc_paths", config.price_mc_paths}, {"with_mc", config.price_with_mc}};
    j["simulate"] = {{"paths", config.simulate_paths},
                     {"params_file", config.simulate_params_file}};
    j["io"] = {{"out_dir", config.out_dir}};
    return j.dump(2) + "\n";
}

void cmd_gen_market(const RunConfig& config) {
    ensure_out_dir(config);
    const std::uint64_t seed = seed_for(config, "market");
    GeneratedMarket market = bs_market(market_model(config), config.grids,
                                       config.market_mc_paths, config.grid_steps, seed);

    write_text_file(out_path(config, "market.csv"), instruments_to_csv(market.calibration));
    write_text_file(out_path(config, "heldout.csv"), instruments_to_csv(market.heldout));

    json manifest;
    manifest["generator"] = {{"model", "black_scholes"},
                             {"sigma", config.market_sigma},
                             {"x0", config.x0},
                             {"mc_paths", config.market_mc_paths},
                             {"grid_steps", config.grid_steps},
                             {"seed", seed}};
    manifest["calibration_standard_errors"] = market.calibration_se;
    manifest["heldout_standard_errors"] = market.heldout_se;
    manifest["config"] = json::parse(config_to_json_text(config));
    write_text_file(out_path(config, "market_manifest.json"), manifest.dump(2) + "\n");
    std::cout << "gen-market: " << market.calibration.size() << " calibration and "
              << market.heldout.size() << " held-out instruments -> " << config.out_dir
              << std::endl;
}

void cmd_fit_payoffs(const RunConfig& config) {
    ensure_out_dir(config);
    const auto market = load_instruments(config, "market.csv");
    const auto heldout = load_instruments(config, "heldout.csv");
    const auto paths = reference_paths(config);

    struct SetSpec {
        const char* name;
        const std::vector<MarketInstrument>* instruments;
    };
    std::string report = "set,instrument_id,kind,strike,maturity,barrier,in_rmse,holdout_rmse,"
                         "payoff_std,design_rank\n";
    for (const SetSpec& set : {SetSpec{"market", &market}, SetSpec{"heldout", &heldout}}) {
        auto fits = fit_signature_payoffs(paths, *set.instruments, config.payoff_order,
                                          config.ridge);
        for (std::size_t i = 0; i < fits.size(); ++i) {
            write_text_file(out_path(config, payoff_file_name(set.name, i)),
                            payoff_to_json(fits[i].payoff).dump(2) + "\n");
            const auto& inst = (*set.instruments)[i];
            report += std::string(set.name) + ',' + std::to_string(i) + ',' +
                      to_string(inst.kind) + ',' + format_double(inst.strike) + ',' +
                      format_double(inst.maturity) + ',' +
                      (is_barrier(inst.kind) ? format_double(inst.barrier) : std::string{}) +
                      ',' + format_double(fits[i].in_sample_rmse) + ',' +
                      format_double(fits[i].holdout_rmse) + ',' +
                      format_double(fits[i].payoff_std) + ',' +
                      std::to_string(fits[i].design_rank) + '\n';
        }
    }
    write_text_file(out_path(config, "payoff_fits.csv"), report);

    json manifest;
    manifest["reference"] = config.fit_reference;
    manifest["paths"] = config.fit_paths;
    manifest["order"] = config.payoff_order;
    manifest["ridge"] = config.ridge;
    manifest["seed"] = seed_for(config, "fit-paths");
    manifest["market_instruments"] = market.size();
    manifest["heldout_instruments"] = heldout.size();
    write_text_file(out_path(config, "payoffs_manifest.json"), manifest.dump(2) + "\n");
    std::cout << "fit-payoffs: " << market.size() + heldout.size() << " payoffs fitted on "
              << paths.size() << " reference paths -> " << config.out_dir << std::endl;
}

CalibrationProblem load_calibration_problem(const RunConfig& config) {
    const auto market = load_instruments(config, "market.csv");
    const auto payoffs = load_payoffs(config, "market", market.size());

    CalibrationProblem problem;
    problem.model_order = config.model_order;
    problem.horizon = config.horizon;
    problem.x0 = config.x0;
    problem.config = config.optimizer;
    if (!config.weights.empty() && config.weights.size() != market.size())
        throw ConfigError("calibration.weights must match the market instrument count");
    for (std::size_t i = 0; i < market.size(); ++i) {
        if (!market[i].observed_price)
            throw ConfigError("market.csv: instrument " + std::to_string(i) + " has no price");
        CalibrationInstrument inst;
        inst.payoff = payoffs[i];
        inst.price = *market[i].observed_price;
        inst.weight = config.weights.empty() ? 1.0 : config.weights[i];
        inst.meta = market[i];
        problem.instruments.push_back(std::move(inst));
    }
    return problem;
}

void cmd_calibrate(const RunConfig& config) {
    ensure_out_dir(config);
    CalibrationProblem problem = load_calibration_problem(config);
    const auto& market = problem.instruments;

    CalibrationResult result = calibrate(problem);
    if (!std::isfinite(result.objective))
        throw NumericalError("calibration did not produce a finite objective");

    json out;
    out["params"] = params_to_json(result.params);
    out["objective"] = result.objective;
    out["stop_reason"] = [&] {
        switch (result.stop_reason) {
            case StopReason::gradient: return "gradient";
            case StopReason::step: return "step";
            case StopReason::max_iterations: return "max_iterations";
            case StopReason::stalled: return "stalled";
        }
        return "unknown";
    }();
    out["best_start"] = result.best_start;
    out["start_objectives"] = result.start_objectives;
    out["truncated_lift"] = result.truncated;
    json trace = json::array();
    for (const auto& rec : result.trace)
        trace.push_back({{"iteration", rec.iteration},
                         {"objective", rec.objective},
                         {"gradient_norm", rec.gradient_norm},
                         {"step_norm", rec.step_norm},
                         {"damping", rec.damping}});
    out["trace"] = std::move(trace);
    write_text_file(out_path(config, "calibration.json"), out.dump(2) + "\n");

    std::string residuals = "instrument_id,model_price,market_price,abs_error\n";
    for (std::size_t i = 0; i < market.size(); ++i) {
        residuals += std::to_string(i) + ',' + format_double(result.model_prices[i]) + ',' +
                     format_double(market[i].price) + ',' +
                     format_double(std::abs(result.model_prices[i] - market[i].price)) + '\n';
    }
    write_text_file(out_path(config, "residuals.csv"), residuals);
    std::cout << "calibrate: objective " << format_double(result.objective) << " after "
              << result.trace.size() - 1 << " accepted steps (stop: " << out["stop_reason"]
              << ") -> " << config.out_dir << std::endl;
}

void cmd_price(const RunConfig& config) {
    ensure_out_dir(config);
    const auto heldout = load_instruments(config, "heldout.csv");
    const auto payoffs = load_payoffs(config, "heldout", heldout.size());
    SigSdeParams params = params_from_json(
        load_json_file(out_path(config, "calibration.json"), "calibration.json")
            .at("params"));

    const int algebra_order = effective_algebra_order(config);
    // one expected signature per distinct maturity
    std::map<double, LinearFunctional> esig;
    TruncationReport report;
    for (const auto& payoff : payoffs)
        if (!esig.count(payoff.maturity))
            esig.emplace(payoff.maturity,
                         model_expected_signature(params, payoff.maturity, config.payoff_order,
                                                  algebra_order, &report));
    if (report.truncated)
        std::cerr << "note: word lifts truncated at order " << report.algebra_order
                  << " (full support needs " << report.required_order
                  << "); factorial tail bound " << format_double(report.tail_bound)
                  << std::endl;

    std::vector<McEstimate> mc(heldout.size());
    if (config.price_with_mc)
        mc = mc_prices(params, heldout, config.price_mc_paths, seed_for(config, "price-mc"),
                       uniform_grid(config.horizon, config.grid_steps));

    std::string csv =
        "instrument_id,kind,strike,maturity,barrier,price_algebraic,price_mc,se_mc,"
        "price_reference,abs_error\n";
    for (std::size_t i = 0; i < heldout.size(); ++i) {
        const double algebraic = price_signature_payoff(payoffs[i], esig.at(payoffs[i].maturity));
        const auto& inst = heldout[i];
        csv += std::to_string(i) + ',' + to_string(inst.kind) + ',' +
               format_double(inst.strike) + ',' + format_double(inst.maturity) + ',' +
               (is_barrier(inst.kind) ? format_double(inst.barrier) : std::string{}) + ',' +
               format_double(algebraic) + ',';
        if (config.price_with_mc)
            csv += format_double(mc[i].price) + ',' + format_double(mc[i].standard_error);
        else
            csv += ",";
        csv += ',';
        if (inst.observed_price) {
            csv += format_double(*inst.observed_price) + ',' +
                   format_double(std::abs(algebraic - *inst.observed_price));
        } else {
            csv += ',';
        }
        csv += '\n';
    }
    write_text_file(out_path(config, "prices.csv"), csv);
    std::cout << "price: " << heldout.size() << " instruments -> "
              << out_path(config, "prices.csv") << std::endl;
}

void cmd_simulate(const RunConfig& config) {
    ensure_out_dir(config);
    SigSdeParams params = [&] {
        if (!config.simulate_params_file.empty())
            return params_from_json(
                load_json_file(config.simulate_params_file, "simulate.params_file"));
        return params_from_json(
            load_json_file(out_path(config, "calibration.json"), "calibration.json")
                .at("params"));
    }();

    const auto grid = uniform_grid(config.horizon, config.grid_steps);
    const std::uint64_t seed = seed_for(config, "simulate");
    std::vector<double> values((grid.size()) * config.simulate_paths);
    for (std::size_t p = 0; p < config.simulate_paths; ++p) {
        RngStream rng = RngStream::substream(seed, p);
        DiscretePath path = simulate(params, grid, rng);
        for (std::size_t k = 0; k < grid.size(); ++k)
            values[k * config.simulate_paths + p] = path.value(k, 0);
    }
    DiscretePath bundle(grid, std::move(values), static_cast<int>(config.simulate_paths));
    write_text_file(out_path(config, "paths.csv"), path_to_csv(bundle));
    std::cout << "simulate: " << config.simulate_paths << " paths x " << config.grid_steps
              << " steps -> " << out_path(config, "paths.csv") << std::endl;
}

namespace {

void emit_error(int code, const char* kind, const std::string& message) {
    json err{{"error", {{"code", code}, {"kind", kind}, {"message", message}}}};
    std::cerr << err.dump() << std::endl;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    std::string command;
    std::string config_path;
    std::vector<std::string> positional;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::size_t> paths_override;
    std::optional<std::string> out_override;

    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            const std::string& arg = args[i];
            auto next = [&]() -> const std::string& {
                if (i + 1 >= args.size()) throw ConfigError("missing value after " + arg);
                return args[++i];
            };
            if (arg == "--config")
                config_path = next();
            else if (arg == "--seed")
                seed_override = std::stoull(next());
            else if (arg == "--paths")
                paths_override = std::stoull(next());
            else if (arg == "--out")
                out_override = next();
            else if (arg == "--help" || arg == "-h") {
                std::cout
                    << "usage: sigsde <command> [--config file.json] [--seed N] [--paths N] "
                       "[--out dir]\n"
                       "commands:\n"
                       "  gen-market   synthesize the option market (csv + manifest)\n"
                       "  fit-payoffs  regress instrument payoffs onto signature features\n"
                       "  calibrate    fit the volatility readout to the market prices\n"
                       "  price        price the held-out instruments (algebraic + MC)\n"
                       "  simulate     sample model paths under the calibrated readout\n"
                       "--paths overrides the path count of the selected command;\n"
                       "all other settings come from the config file.\n";
                return kExitOk;
            } else if (!arg.empty() && arg[0] == '-') {
                throw ConfigError("unknown option: " + arg);
            } else if (command.empty()) {
                command = arg;
            } else {
                throw ConfigError("unexpected argument: " + arg);
            }
        }
        if (command.empty()) throw ConfigError("no command given (try --help)");

        RunConfig config;
        if (!config_path.empty()) {
            std::string text;
            try {
                text = read_text_file(config_path);
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
            config = config_from_json_text(text);
        }
        if (seed_override) config.seed = *seed_override;
        if (out_override) config.out_dir = *out_override;
        if (paths_override) {
            if (command == "gen-market") config.market_mc_paths = *paths_override;
            else if (command == "fit-payoffs") config.fit_paths = *paths_override;
            else if (command == "price") config.price_mc_paths = *paths_override;
            else if (command == "simulate") config.simulate_paths = *paths_override;
        }

        if (command == "gen-market")
            cmd_gen_market(config);
        else if (command == "fit-payoffs")
            cmd_fit_payoffs(config);
        else if (command == "calibrate")
            cmd_calibrate(config);
        else if (command == "price")
            cmd_price(config);
        else if (command == "simulate")
            cmd_simulate(config);
        else
            throw ConfigError("unknown command: " + command);
        return kExitOk;
    } catch (const ConfigError& e) {
        emit_error(kExitConfig, "config", e.what());
        return kExitConfig;
    } catch (const NumericalError& e) {
        emit_error(kExitNumerical, "numerical", e.what());
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        emit_error(kExitConfig, "config", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        emit_error(kExitNumerical, "runtime", e.what());
        return kExitNumerical;
    }
}

} // namespace sigsde
