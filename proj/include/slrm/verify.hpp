#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "slrm/continuous.hpp"
#include "slrm/exact_policies.hpp"
#include "slrm/oracles.hpp"
#include "slrm/personalization.hpp"
#include "slrm/tracking.hpp"

namespace slrm {

struct VerifyResult {
    std::string name;
    bool passed = true;
    std::string detail;

    void fail(const std::string& why) {
        if (passed) detail = why;
        passed = false;
    }
};

// The exhaustively checked deterministic family: every valuation sequence in
// {0..m}^T for every ladder, k and T in range.
struct DetFamily {
    std::vector<PriceLadder> ladders;
    int max_k = 2;
    int max_T = 4;

    static DetFamily small_default() {
        return {{PriceLadder::parse("1,2,4"), PriceLadder::parse("1,3")}, 2, 4};
    }
    static DetFamily acceptance() {
        return {{PriceLadder::parse("1,2,4"), PriceLadder::parse("1,2,3"),
                 PriceLadder::parse("2,5"), PriceLadder::parse("3")},
                3, 5};
    }
};

template <class Fn>
void for_each_det_instance(const DetFamily& family, Fn&& fn) {
    for (const auto& ladder : family.ladders) {
        int m = ladder.size();
        for (int k = 1; k <= family.max_k; ++k) {
            for (int T = 1; T <= family.max_T; ++T) {
                std::vector<int> seq(T, 0);
                for (;;) {
                    fn(ValuationInstance::deterministic(ladder, k, seq));
                    int pos = T - 1;
                    while (pos >= 0 && seq[pos] == m) seq[pos--] = 0;
                    if (pos < 0) break;
                    ++seq[pos];
                }
            }
        }
    }
}

// Small random stochastic instances with exactly normalized rational pmfs.
inline ValuationInstance random_exact_instance(Rng& rng, int max_m, int max_k, int max_T,
                                               int denom = 12) {
    int m = 1 + static_cast<int>(rng.next_u64() % max_m);
    std::vector<Rational> prices;
    int last = 0;
    for (int j = 0; j < m; ++j) {
        last += 1 + static_cast<int>(rng.next_u64() % 3);
        prices.push_back(Rational(last));
    }
    PriceLadder ladder = PriceLadder::from_prices(std::move(prices));
    int k = 1 + static_cast<int>(rng.next_u64() % max_k);
    int T = 1 + static_cast<int>(rng.next_u64() % max_T);
    std::vector<Arrival> arrivals;
    for (int t = 0; t < T; ++t) {
        std::vector<Rational> weights(m + 1);
        Rational sum = 0;
        for (int j = 0; j <= m; ++j) {
            weights[j] = static_cast<int>(rng.next_u64() % (denom + 1));
            sum += weights[j];
        }
        if (sum == 0) {
            weights[0] = 1;
            sum = 1;
        }
        for (auto& w : weights) w /= sum;
        arrivals.push_back(Arrival::from_pmf(std::move(weights)));
    }
    return ValuationInstance(std::move(ladder), k, std::move(arrivals));
}

// ----- the suites -----------------------------------------------------------

// Exact competitiveness identity: E[ALG] = OPT / q for the tracking
// procedure, its inventory-conditional variant, and the random fixed price,
// on every deterministic sequence of the family. Zero tolerance.
inline VerifyResult verify_theorem1(const DetFamily& family) {
    VerifyResult res{"theorem1-exact-competitiveness"};
    long count = 0;
    for_each_det_instance(family, [&](const ValuationInstance& inst) {
        if (!res.passed) return;
        ++count;
        std::vector<int> vals;
        for (int t = 1; t <= inst.horizon(); ++t) vals.push_back(inst.arrival(t).det_index);
        Rational target = offline_opt(inst.ladder(), inst.k(), vals) * inst.ladder().ratio();
        ExactVt vt;
        if (exact_policy_revenue(inst, vt) != target)
            res.fail("tracking revenue != OPT/q on instance " + inst.id());
        ExactFixedSkim ps;
        if (exact_policy_revenue(inst, ps) != target)
            res.fail("fixed-skim revenue != OPT/q");
        if (chain_run(inst, conditional_decision_table(inst, false)).expected_revenue != target)
            res.fail("conditional variant revenue != OPT/q");
    });
    res.detail = res.passed ? std::to_string(count) + " instances, exact equality" : res.detail;
    return res;
}

// Per-unit depletion law: Pr[unit i sold by end of t] = (1/q) sum_{j<=level} q^(j).
inline VerifyResult verify_lemma1(const DetFamily& family) {
    VerifyResult res{"lemma1-sold-probability"};
    long count = 0;
    for_each_det_instance(family, [&](const ValuationInstance& inst) {
        if (!res.passed) return;
        ++count;
        A1Analysis analysis = analyze_a1_exact(inst);
        DetTrackInfo track = deterministic_track(inst);
        for (int t = 1; t <= inst.horizon(); ++t) {
            const std::vector<int>& levels =
                t < inst.horizon() ? track.levels_before[t + 1] : track.levels_final;
            for (int i = 0; i < inst.k(); ++i) {
                if (analysis.sold_marginal[t][i] != inst.ladder().sold_prob_at_level(levels[i]))
                    res.fail("depletion law broken at t=" + std::to_string(t));
            }
        }
    });
    if (res.passed) res.detail = std::to_string(count) + " instances, exact";
    return res;
}

// Inventory-distribution equivalence of the conditional variant, plus the
// conditional price law it is built from.
inline VerifyResult verify_lemma3(const DetFamily& family) {
    VerifyResult res{"lemma3-inventory-equivalence"};
    long count = 0;
    for_each_det_instance(family, [&](const ValuationInstance& inst) {
        if (!res.passed) return;
        ++count;
        A1Analysis analysis = analyze_a1_exact(inst);
        RatDecisionTable table = conditional_decision_table(inst, false);
        ChainResult chain = chain_run(inst, table);
        for (int t = 0; t <= inst.horizon(); ++t)
            for (int kp = 0; kp <= inst.k(); ++kp)
                if (chain.inventory_dist[t][kp] != analysis.run.inventory_dist[t][kp])
                    res.fail("inventory distributions differ at t=" + std::to_string(t));
        for (int t = 1; t <= inst.horizon(); ++t)
            for (int kp = 0; kp <= inst.k(); ++kp)
                if (analysis.cond_price[t][kp] && analysis.cond_price[t][kp]->p != table[t][kp].p)
                    res.fail("conditional price law differs at t=" + std::to_string(t));
    });
    if (res.passed) res.detail = std::to_string(count) + " instances, exact";
    return res;
}

// Strict monotonicity of the conditional reject probability in remaining
// inventory, whenever the unconditional sold probability is interior.
inline VerifyResult verify_theorem5(const DetFamily& family) {
    VerifyResult res{"theorem5-monotone-reject"};
    long comparisons = 0;
    for_each_det_instance(family, [&](const ValuationInstance& inst) {
        if (!res.passed) return;
        GammaTables gt = gamma_tables_exact(inst);
        for (int t = 1; t <= inst.horizon(); ++t) {
            if (!(gt.uncond[t] > 0 && gt.uncond[t] < 1)) continue;
            for (int k1 = 0; k1 <= inst.k(); ++k1) {
                if (!gt.gamma[t][k1]) continue;
                for (int k2 = k1 + 1; k2 <= inst.k(); ++k2) {
                    if (!gt.gamma[t][k2]) continue;
                    ++comparisons;
                    if (!(*gt.gamma[t][k1] > *gt.gamma[t][k2]))
                        res.fail("gamma not strictly decreasing at t=" + std::to_string(t));
                }
            }
        }
    });
    if (res.passed) res.detail = std::to_string(comparisons) + " strict comparisons";
    return res;
}

// Max-price variant dominates the conditional variant; the personalization
// wrapper dominates its base and preserves per-step consumption exactly.
inline VerifyResult verify_dominance(const DetFamily& family) {
    VerifyResult res{"dominance-and-personalization"};
    long count = 0;
    for_each_det_instance(family, [&](const ValuationInstance& inst) {
        if (!res.passed) return;
        ++count;
        RatDecisionTable base = conditional_decision_table(inst, false);
        ChainResult base_run = chain_run(inst, base);
        ChainResult max_run = chain_run(inst, conditional_decision_table(inst, true));
        if (max_run.expected_revenue < base_run.expected_revenue)
            res.fail("max-price variant earned less");
        ChainResult pers_run = chain_run(inst, personalize_table(base, inst));
        if (pers_run.expected_revenue < base_run.expected_revenue)
            res.fail("personalized variant earned less");
        for (int t = 1; t <= inst.horizon(); ++t)
            if (pers_run.step_consumption[t] != base_run.step_consumption[t])
                res.fail("personalization changed consumption at t=" + std::to_string(t));
    });
    if (res.passed) res.detail = std::to_string(count) + " instances, exact";
    return res;
}

// Stochastic equality: the conditional-law policy earns exactly E[OPT]/q on
// random exactly-normalized instances.
inline VerifyResult verify_exp_equality(int instances, int max_m, int max_k, int max_T,
                                        std::uint64_t seed) {
    VerifyResult res{"theorem4-stochastic-equality"};
    Rng rng(seed);
    for (int n = 0; n < instances && res.passed; ++n) {
        ValuationInstance inst = random_exact_instance(rng, max_m, max_k, max_T);
        Rational target = expected_opt_exact(inst) * inst.ladder().ratio();
        ExactTablePolicy exp(exp_decision_table(inst));
        Rational got = exact_policy_revenue(inst, exp, 20'000'000);
        if (got != target) res.fail("E[ALG] != E[OPT]/q on random instance " + std::to_string(n));
    }
    if (res.passed) res.detail = std::to_string(instances) + " random instances, exact";
    return res;
}

// Continuous-interval equality: mean revenue within rel_tol of OPT/(1+ln R).
inline VerifyResult verify_continuous(double R, int k, int reps, double rel_tol,
                                      std::uint64_t seed) {
    VerifyResult res{"continuous-equality"};
    std::vector<std::vector<double>> sequences = {
        {4.0, 1.0, 4.0, 1.0, 2.0, 2.0}, {1.0, 1.5, 2.5, 4.0}, {0.0, 4.0, 0.0, 3.0},
        {2.0, 2.0, 2.0, 2.0, 2.0},      {4.0, 4.0, 4.0, 1.0},
    };
    int idx = 0;
    for (const auto& seq : sequences) {
        ContinuousInstance inst{ContinuousRange(R), k, seq};
        inst.validate();
        double target = continuous_opt(inst) * inst.range.competitive_ratio();
        McEstimate est = simulate_continuous(inst, reps, hash_mix({seed, (std::uint64_t)idx++}));
        if (std::abs(est.mean - target) > rel_tol * target)
            res.fail("mean " + std::to_string(est.mean) + " vs target " + std::to_string(target));
    }
    if (res.passed)
        res.detail = std::to_string(sequences.size()) + " sequences within " +
                     std::to_string(rel_tol * 100) + "%";
    return res;
}

inline std::vector<std::string> verify_suite_names() {
    return {"theorem1", "lemma1", "lemma3", "theorem5", "dominance", "exp", "continuous"};
}

inline std::vector<VerifyResult> run_verify_suite(const std::string& name) {
    DetFamily family = DetFamily::small_default();
    std::vector<VerifyResult> out;
    auto want = [&](const std::string& s) { return name == "all" || name == s; };
    if (want("theorem1")) out.push_back(verify_theorem1(family));
    if (want("lemma1")) out.push_back(verify_lemma1(family));
    if (want("lemma3")) out.push_back(verify_lemma3(family));
    if (want("theorem5")) out.push_back(verify_theorem5(family));
    if (want("dominance")) out.push_back(verify_dominance(family));
    if (want("exp")) out.push_back(verify_exp_equality(10, 3, 2, 4, 20240801));
    if (want("continuous")) out.push_back(verify_continuous(4.0, 3, 20000, 0.03, 20240802));
    if (out.empty()) throw std::invalid_argument("unknown verify suite: " + name);
    return out;
}

}  // namespace slrm
