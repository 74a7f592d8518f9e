// Command-line harness: ladder inspection, benchmark oracles, single-instance
// evaluation, grid experiments, and the enumeration-backed verification
// suites. See README.md for usage.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "slrm/continuous.hpp"
#include "slrm/exact_policies.hpp"
#include "slrm/instances.hpp"
#include "slrm/oracles.hpp"
#include "slrm/policies.hpp"
#include "slrm/simulator.hpp"
#include "slrm/verify.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<std::string> resolve_policies(const std::string& arg) {
    if (arg == "all") return slrm::all_policy_ids();
    std::vector<std::string> ids = split_csv(arg);
    for (const auto& id : ids) slrm::make_policy(id);  // validates
    return ids;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

struct GridSpec {
    int lo = 1, hi = 10, per = 100;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    if (std::sscanf(s.c_str(), "%d:%d:%d", &g.lo, &g.hi, &g.per) != 3 || g.lo <= 0 ||
        g.hi < g.lo || g.per <= 0)
        throw CLI::ValidationError("--grid expects LO:HI:COUNT, e.g. 1:10:100");
    return g;
}

int cmd_ladder(const std::string& prices, const std::string& continuous) {
    if (!continuous.empty()) {
        auto parts = split_csv(continuous);
        slrm::ContinuousRange range =
            parts.size() == 2
                ? slrm::ContinuousRange::from_bounds(std::stod(parts[0]), std::stod(parts[1]))
                : slrm::ContinuousRange(std::stod(parts[0]));
        std::printf("R = %.9g (unit %.9g)\n", range.r_max_ratio, range.unit);
        std::printf("competitive ratio 1/(1+ln R) = %.9g\n", range.competitive_ratio());
        return 0;
    }
    slrm::PriceLadder ladder = slrm::PriceLadder::parse(prices);
    std::printf("m = %d\n", ladder.size());
    for (int j = 1; j <= ladder.size(); ++j)
        std::printf("r(%d) = %s   q(%d) = %s = %.9g\n", j,
                    slrm::format_rational(ladder.price(j)).c_str(), j,
                    slrm::format_rational(ladder.weight(j)).c_str(), ladder.weight_d(j));
    std::printf("q = %s = %.9g\n", slrm::format_rational(ladder.weight_sum()).c_str(),
                slrm::to_double(ladder.weight_sum()));
    std::printf("c*(P) = %s = %.9g\n", slrm::format_rational(ladder.ratio()).c_str(),
                ladder.ratio_d());
    return 0;
}

int cmd_opt(const std::string& instance_path, const std::string& oracle,
            const std::string& policy_id, int reps, std::uint64_t seed, bool exact) {
    slrm::ValuationInstance inst = slrm::read_instance(instance_path);
    if (oracle == "offline") {
        if (!inst.all_deterministic())
            throw std::runtime_error("offline oracle needs deterministic valuations");
        std::vector<int> vals;
        for (int t = 1; t <= inst.horizon(); ++t) vals.push_back(inst.arrival(t).det_index);
        slrm::Rational v = slrm::offline_opt(inst.ladder(), inst.k(), vals);
        std::printf("%.12g %s\n", slrm::to_double(v), slrm::format_ratio(v).c_str());
    } else if (oracle == "expected") {
        if (exact) {
            slrm::Rational v = slrm::expected_opt_exact(inst);
            std::printf("%.12g %s\n", slrm::to_double(v), slrm::format_ratio(v).c_str());
        } else {
            slrm::McEstimate est = slrm::expected_opt_mc(inst, reps, seed);
            std::printf("%.12g (se %.3g, %d reps)\n", est.mean, est.se, est.reps);
        }
    } else if (oracle == "dp") {
        if (exact) {
            auto dp = slrm::dp_solve_exact(inst);
            slrm::Rational v = dp.value[0][inst.k()];
            std::printf("%.12g %s\n", slrm::to_double(v), slrm::format_ratio(v).c_str());
        } else {
            std::printf("%.12g\n", slrm::dp_solve(inst).value[0][inst.k()]);
        }
    } else if (oracle == "dlp") {
        slrm::Rational v = slrm::dlp_value_exact(inst);
        std::printf("%.12g %s\n", slrm::to_double(v), slrm::format_ratio(v).c_str());
    } else if (oracle == "policy") {
        auto pol = slrm::make_exact_policy(policy_id, inst);
        slrm::Rational v = slrm::exact_policy_revenue(inst, *pol, 20'000'000);
        std::printf("%.12g %s\n", slrm::to_double(v), slrm::format_ratio(v).c_str());
    } else {
        throw std::runtime_error("unknown oracle: " + oracle);
    }
    return 0;
}

json config_json(const slrm::ExperimentConfig& cfg) {
    json j;
    j["policies"] = cfg.policy_ids;
    j["reps"] = cfg.replications;
    j["opt_reps"] = cfg.opt_replications;
    j["seed"] = cfg.seed;
    j["epsilon"] = cfg.policy_options.epsilon;
    j["vt_samples"] = cfg.policy_options.vt_samples;
    j["exp_cap"] = cfg.policy_options.exp_cap;
    return j;
}

void emit_report(const slrm::SimulationReport& report, const slrm::ExperimentConfig& cfg,
                 const json& extra, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream rows(out_dir + "/rows.csv");
        slrm::write_rows_csv(report, rows);
    }
    {
        std::ofstream table(out_dir + "/table.csv");
        slrm::write_table_csv(report, table);
    }
    {
        std::ofstream series(out_dir + "/series.csv");
        slrm::write_series_csv(report, series);
    }
    json cfg_json = config_json(cfg);
    for (auto& [k, v] : extra.items()) cfg_json[k] = v;
    write_text(out_dir + "/config.json", cfg_json.dump(1) + "\n");
    std::printf("wrote %s/rows.csv, table.csv, series.csv, config.json\n", out_dir.c_str());
}

int cmd_simulate(const std::string& instance_path, slrm::ExperimentConfig cfg,
                 const std::string& out_dir) {
    slrm::ValuationInstance inst = slrm::read_instance(instance_path);
    if (inst.id().empty()) inst.set_id(std::filesystem::path(instance_path).stem().string());
    cfg.fallback_exp = false;  // cap violations surface as exit 3 here
    slrm::SimulationReport report = slrm::run_experiment({inst}, cfg);
    json extra;
    extra["command"] = "simulate";
    extra["instance"] = instance_path;
    emit_report(report, cfg, extra, out_dir);
    return 0;
}

int cmd_experiment(const std::string& prices, const std::string& ks, const GridSpec& grid,
                   double b_lo, double b_hi, slrm::ExperimentConfig cfg,
                   const std::string& out_dir) {
    slrm::ExperimentGrid eg{slrm::PriceLadder::parse(prices), {}, {}, grid.per, b_lo, b_hi,
                            cfg.seed};
    for (const auto& k : split_csv(ks)) eg.inventories.push_back(std::stoi(k));
    for (int mult = grid.lo; mult <= grid.hi; ++mult) eg.multipliers.push_back(mult);
    std::vector<slrm::ValuationInstance> instances = slrm::generate_grid(eg);
    slrm::SimulationReport report = slrm::run_experiment(instances, cfg);
    json extra;
    extra["command"] = "experiment";
    extra["prices"] = prices;
    extra["k"] = ks;
    extra["grid"] = std::to_string(grid.lo) + ":" + std::to_string(grid.hi) + ":" +
                    std::to_string(grid.per);
    extra["b_lo"] = b_lo;
    extra["b_hi"] = b_hi;
    emit_report(report, cfg, extra, out_dir);
    return 0;
}

int cmd_verify(const std::string& suite) {
    std::vector<slrm::VerifyResult> results = slrm::run_verify_suite(suite);
    int failures = 0;
    for (const auto& r : results) {
        std::printf("%-34s %s  %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                    r.detail.c_str());
        failures += r.passed ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-leg revenue management policies under limited demand information"};
    app.require_subcommand(1);

    std::string prices = "1,2,4", continuous, instance_path, policies = "all", out_dir = "out";
    std::string ks = "10", grid_arg = "1:10:100", oracle = "expected", policy_id = "vt";
    std::uint64_t seed = 1;
    int reps = 200, opt_reps = 1000;
    double epsilon = 0.05, b_lo = 1.0 / 3.0, b_hi = 4.0 / 3.0;
    bool exact = false;
    std::string suite = "all", config_path;

    auto* ladder_cmd = app.add_subcommand("ladder", "print skimming weights and c*(P)");
    ladder_cmd->add_option("--prices", prices, "comma-separated ladder prices");
    ladder_cmd->add_option("--continuous", continuous, "R, or r_min,r_max");

    auto* opt_cmd = app.add_subcommand("opt", "benchmark oracles on an instance file");
    opt_cmd->add_option("--instance", instance_path, "instance JSON path")->required();
    opt_cmd->add_option("--oracle", oracle, "offline|expected|dp|dlp|policy");
    opt_cmd->add_option("--policy", policy_id, "policy id for --oracle policy");
    opt_cmd->add_option("--reps", reps, "Monte Carlo replications");
    opt_cmd->add_option("--seed", seed, "rng seed");
    opt_cmd->add_flag("--exact", exact, "exact enumeration mode (prints p/q)");

    auto* sim_cmd = app.add_subcommand("simulate", "evaluate policies on one instance");
    sim_cmd->add_option("--instance", instance_path, "instance JSON path");
    sim_cmd->add_option("--policies", policies, "comma-separated policy ids, or 'all'");
    sim_cmd->add_option("--reps", reps, "replications per policy");
    sim_cmd->add_option("--opt-reps", opt_reps, "replications for the OPT estimate");
    sim_cmd->add_option("--epsilon", epsilon, "vt-samp epsilon");
    sim_cmd->add_option("--seed", seed, "master seed");
    sim_cmd->add_option("--out", out_dir, "output directory");
    sim_cmd->add_option("--config", config_path, "re-run from an emitted config.json");

    auto* exp_cmd = app.add_subcommand("experiment", "run the randomized grid study");
    exp_cmd->add_option("--prices", prices, "comma-separated ladder prices");
    exp_cmd->add_option("--k", ks, "comma-separated starting inventories");
    exp_cmd->add_option("--grid", grid_arg, "multiplier grid LO:HI:COUNT (T = mult*k)");
    exp_cmd->add_option("--policies", policies, "comma-separated policy ids, or 'all'");
    exp_cmd->add_option("--reps", reps, "replications per policy");
    exp_cmd->add_option("--opt-reps", opt_reps, "replications for OPT estimates");
    exp_cmd->add_option("--epsilon", epsilon, "vt-samp epsilon");
    exp_cmd->add_option("--b-lo", b_lo, "price-sensitivity lower bound");
    exp_cmd->add_option("--b-hi", b_hi, "price-sensitivity upper bound");
    exp_cmd->add_option("--seed", seed, "master seed");
    exp_cmd->add_option("--out", out_dir, "output directory");
    exp_cmd->add_option("--config", config_path, "re-run from an emitted config.json");

    auto* verify_cmd = app.add_subcommand("verify", "run enumeration-backed invariant suites");
    verify_cmd->add_option("--suite", suite,
                           "theorem1|lemma1|lemma3|theorem5|dominance|exp|continuous|all");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("config not found: " + config_path);
            json j;
            in >> j;
            policies = "";
            for (const auto& p : j.at("policies")) policies += (policies.empty() ? "" : ",") +
                                                               p.get<std::string>();
            reps = j.at("reps").get<int>();
            opt_reps = j.at("opt_reps").get<int>();
            seed = j.at("seed").get<std::uint64_t>();
            epsilon = j.at("epsilon").get<double>();
            if (j.contains("instance")) instance_path = j["instance"].get<std::string>();
            if (j.contains("prices")) prices = j["prices"].get<std::string>();
            if (j.contains("k")) ks = j["k"].get<std::string>();
            if (j.contains("grid")) grid_arg = j["grid"].get<std::string>();
            if (j.contains("b_lo")) b_lo = j["b_lo"].get<double>();
            if (j.contains("b_hi")) b_hi = j["b_hi"].get<double>();
        }

        slrm::ExperimentConfig cfg;
        cfg.policy_ids = resolve_policies(policies.empty() ? "all" : policies);
        cfg.replications = reps;
        cfg.opt_replications = opt_reps;
        cfg.seed = seed;
        cfg.policy_options.epsilon = epsilon;

        if (ladder_cmd->parsed()) return cmd_ladder(prices, continuous);
        if (opt_cmd->parsed()) return cmd_opt(instance_path, oracle, policy_id, reps, seed, exact);
        if (sim_cmd->parsed()) return cmd_simulate(instance_path, cfg, out_dir);
        if (exp_cmd->parsed())
            return cmd_experiment(prices, ks, parse_grid(grid_arg), b_lo, b_hi, cfg, out_dir);
        if (verify_cmd->parsed()) return cmd_verify(suite);
    } catch (const slrm::InstanceNotFound& e) {
        std::fprintf(stderr, "error: instance not found: %s\n", e.what());
        return 2;
    } catch (const slrm::CapExceeded& e) {
        std::fprintf(stderr, "error: cap exceeded: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
