#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "slrm/instances.hpp"
#include "slrm/oracles.hpp"
#include "slrm/policies.hpp"
#include "slrm/policy.hpp"

namespace slrm {

struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunResult {
    double revenue = 0.0;
    int sales = 0;
    std::vector<Observation> trace;
};

// One replication: sample valuations, query the policy per arrival in order,
// sell iff V_t >= P_t. The policy draws (offered price included) flow through
// the policy's own stream; valuations come from a separate stream, both
// derived from the replication seed.
inline RunResult run_once(const ValuationInstance& inst, Policy& policy, std::uint64_t seed,
                          bool collect_trace = false) {
    Rng valuation_rng(hash_mix({seed, 0x76616cULL}));
    policy.reset(hash_mix({seed, 0x706f6cULL}));
    const PriceLadder& ladder = inst.ladder();
    int m = ladder.size();
    RunResult out;
    int remaining = inst.k();
    for (int t = 1; t <= inst.horizon(); ++t) {
        Decision d = policy.decide(t, remaining);
        if (remaining == 0 && !d.continuous && d.p[m + 1] < 1.0 - 1e-9)
            throw SimulationError("policy " + policy.id() +
                                  " priced with zero inventory at t=" + std::to_string(t));
        Observation ob;
        ob.t = t;
        int v_idx = inst.sample_valuation(t, valuation_rng);
        ob.valuation_index = v_idx;
        if (d.continuous) {
            ob.offered = m + 1;
            double price = d.continuous->range.sample_price(d.continuous->floor,
                                                            policy.rng().next_double());
            ob.price_value = price * d.continuous->range.unit;
            ob.purchased = ladder.price_d(v_idx) >= ob.price_value;
        } else {
            ob.offered = policy.rng().sample(d.p);
            ob.price_value = ob.offered <= m ? ladder.price_d(ob.offered) : 0.0;
            ob.purchased = ob.offered <= m && v_idx >= ob.offered;
        }
        if (ob.purchased) {
            if (remaining == 0)
                throw SimulationError("policy " + policy.id() + " sold with zero inventory at t=" +
                                      std::to_string(t) + " (instance " + inst.id() + ")");
            --remaining;
            ++out.sales;
            out.revenue += ob.price_value;
        }
        policy.observe(ob);
        if (collect_trace) out.trace.push_back(ob);
    }
    return out;
}

// ----- experiment engine ----------------------------------------------------

struct ExperimentConfig {
    std::vector<std::string> policy_ids;
    int replications = 200;
    int opt_replications = 1000;
    std::uint64_t seed = 1;
    PolicyOptions policy_options;
    int threads = 0;          // 0: RM_THREADS env, else hardware
    bool fallback_exp = true; // substitute the sampling policy when vt-exp hits its cap
};

struct PolicyCell {
    std::string policy;
    double mean_revenue = 0.0;
    double se = 0.0;
    double ratio = 0.0;
    int replications = 0;
    std::uint64_t seed = 0;
    bool anomalous = false;  // ratio above 1 by more than 4 SE; reported, never clamped
    bool exact = false;      // computed without replication (dp)
    bool fallback = false;   // vt-exp replaced by the sampling policy (cap)
};

struct InstanceRow {
    std::string instance_id;
    int k = 0;
    int T = 0;
    double opt_mean = 0.0;
    double opt_se = 0.0;
    std::vector<PolicyCell> cells;
};

struct SimulationReport {
    std::vector<InstanceRow> rows;
    // aggregate mean ratio per (k, policy) and per (k, T, policy)
    std::map<std::pair<int, std::string>, double> table;
    std::map<std::tuple<int, int, std::string>, double> series;

    double mean_ratio(int k, const std::string& policy) const { return table.at({k, policy}); }
    double mean_ratio(int k, int T, const std::string& policy) const {
        return series.at({k, T, policy});
    }

    // standard error of the per-instance ratios behind a table cell
    double ratio_se(int k, const std::string& policy) const {
        double sum = 0, sumsq = 0;
        int n = 0;
        for (const auto& row : rows) {
            if (row.k != k) continue;
            for (const auto& c : row.cells)
                if (c.policy == policy) {
                    sum += c.ratio;
                    sumsq += c.ratio * c.ratio;
                    ++n;
                }
        }
        if (n < 2) return 0.0;
        double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1));
        return std::sqrt(var / n);
    }
};

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RM_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Evaluates every policy on one instance. OPT is estimated once and shared
// across policies as the common ratio denominator.
inline InstanceRow evaluate_instance(const ValuationInstance& inst, const ExperimentConfig& cfg) {
    InstanceRow row;
    row.instance_id = inst.id();
    row.k = inst.k();
    row.T = inst.horizon();
    std::uint64_t iid = hash_str(cfg.seed, inst.id());
    if (inst.all_deterministic()) {
        std::vector<int> vals;
        for (int t = 1; t <= inst.horizon(); ++t) vals.push_back(inst.arrival(t).det_index);
        row.opt_mean = to_double(offline_opt(inst.ladder(), inst.k(), vals));
        row.opt_se = 0.0;
    } else {
        McEstimate opt = expected_opt_mc(inst, cfg.opt_replications, hash_mix({iid, 0x6f7074ULL}));
        row.opt_mean = opt.mean;
        row.opt_se = opt.se;
    }
    for (const auto& pid : cfg.policy_ids) {
        PolicyCell cell;
        cell.policy = pid;
        cell.seed = hash_str(iid, pid);
        std::unique_ptr<Policy> policy = make_policy(pid, cfg.policy_options);
        try {
            policy->prepare(inst, hash_mix({cell.seed, 0x70726570ULL}));
        } catch (const CapExceeded&) {
            if (!cfg.fallback_exp) throw;
            // the exact conditional policy refuses big instances; the sampling
            // emulation stands in under the same column
            policy = make_policy("vt-samp", cfg.policy_options);
            policy->prepare(inst, hash_mix({cell.seed, 0x70726570ULL}));
            cell.fallback = true;
        }
        if (pid == "dp") {
            cell.exact = true;
            cell.replications = 0;
            cell.mean_revenue = static_cast<DpPolicy*>(policy.get())->exact_value();
            cell.se = 0.0;
        } else {
            double sum = 0.0, sumsq = 0.0;
            for (int r = 0; r < cfg.replications; ++r) {
                RunResult res = run_once(inst, *policy,
                                         hash_mix({cell.seed, static_cast<std::uint64_t>(r)}));
                sum += res.revenue;
                sumsq += res.revenue * res.revenue;
            }
            cell.replications = cfg.replications;
            cell.mean_revenue = sum / cfg.replications;
            double var = std::max(0.0, (sumsq - sum * sum / cfg.replications) /
                                           std::max(1, cfg.replications - 1));
            cell.se = std::sqrt(var / cfg.replications);
        }
        cell.ratio = row.opt_mean > 0 ? cell.mean_revenue / row.opt_mean : 0.0;
        double ratio_se = row.opt_mean > 0 ? cell.se / row.opt_mean : 0.0;
        cell.anomalous = cell.ratio > 1.0 + 4.0 * ratio_se + 1e-12;
        row.cells.push_back(std::move(cell));
    }
    return row;
}

// Instances are distributed over workers; the report is reduced in instance
// order regardless of scheduling, so the output is scheduling-independent.
inline SimulationReport run_experiment(const std::vector<ValuationInstance>& instances,
                                       const ExperimentConfig& cfg) {
    SimulationReport report;
    report.rows.resize(instances.size());
    int threads = resolve_threads(cfg.threads);
    if (threads <= 1 || instances.size() <= 1) {
        for (std::size_t i = 0; i < instances.size(); ++i)
            report.rows[i] = evaluate_instance(instances[i], cfg);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= instances.size()) return;
                report.rows[i] = evaluate_instance(instances[i], cfg);
            }
        };
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::map<std::pair<int, std::string>, std::pair<double, int>> table_acc;
    std::map<std::tuple<int, int, std::string>, std::pair<double, int>> series_acc;
    for (const auto& row : report.rows) {
        for (const auto& cell : row.cells) {
            auto& t = table_acc[{row.k, cell.policy}];
            t.first += cell.ratio;
            t.second += 1;
            auto& s = series_acc[{row.k, row.T, cell.policy}];
            s.first += cell.ratio;
            s.second += 1;
        }
    }
    for (const auto& [key, acc] : table_acc) report.table[key] = acc.first / acc.second;
    for (const auto& [key, acc] : series_acc) report.series[key] = acc.first / acc.second;
    return report;
}

// ----- CSV output ------------------------------------------------------------

inline void write_rows_csv(const SimulationReport& report, std::ostream& out) {
    out << "k,T,instance_id,policy,mean_revenue,se,mean_ratio,replications,seed\n";
    char buf[256];
    for (const auto& row : report.rows) {
        for (const auto& cell : row.cells) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%s,%s,%.9g,%.9g,%.9g,%d,%llu\n", row.k, row.T,
                          row.instance_id.c_str(), cell.policy.c_str(), cell.mean_revenue, cell.se,
                          cell.ratio, cell.replications,
                          static_cast<unsigned long long>(cell.seed));
            out << buf;
        }
    }
}

inline void write_table_csv(const SimulationReport& report, std::ostream& out) {
    out << "k,policy,mean_ratio\n";
    char buf[128];
    for (const auto& [key, ratio] : report.table) {
        std::snprintf(buf, sizeof(buf), "%d,%s,%.9g\n", key.first, key.second.c_str(), ratio);
        out << buf;
    }
}

inline void write_series_csv(const SimulationReport& report, std::ostream& out) {
    out << "k,T,policy,mean_ratio\n";
    char buf[128];
    for (const auto& [key, ratio] : report.series) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%s,%.9g\n", std::get<0>(key), std::get<1>(key),
                      std::get<2>(key).c_str(), ratio);
        out << buf;
    }
}

}  // namespace slrm
