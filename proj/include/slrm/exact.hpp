#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "slrm/instances.hpp"
#include "slrm/policy.hpp"
#include "slrm/rational.hpp"

namespace slrm {

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Clairvoyant optimum of a realized sequence: sum of the min{k, T} largest
// valuations.
inline Rational offline_opt(const PriceLadder& ladder, int k, std::vector<int> valuation_indices) {
    std::sort(valuation_indices.begin(), valuation_indices.end(), std::greater<>());
    Rational total = 0;
    int take = std::min<int>(k, static_cast<int>(valuation_indices.size()));
    for (int i = 0; i < take; ++i) total += ladder.price(valuation_indices[i]);
    return total;
}

// Exhaustive E[OPT] over all (m+1)^T valuation realizations. Exact rationals;
// refuses above the path cap.
inline Rational expected_opt_exact(const ValuationInstance& inst,
                                   std::uint64_t path_cap = 1'000'000) {
    int m = inst.ladder().size();
    int T = inst.horizon();
    double paths = std::pow(static_cast<double>(m + 1), T);
    if (paths > static_cast<double>(path_cap))
        throw CapExceeded("expected_opt: (m+1)^T exceeds the enumeration cap");
    Rational total = 0;
    std::vector<int> path(T);
    std::function<void(int, Rational)> walk = [&](int t, Rational prob) {
        if (prob == 0) return;
        if (t > T) {
            total += prob * offline_opt(inst.ladder(), inst.k(), path);
            return;
        }
        const Arrival& a = inst.arrival(t);
        for (int v = 0; v <= m; ++v) {
            if (a.pmf[v] == 0) continue;
            path[t - 1] = v;
            walk(t + 1, prob * a.pmf[v]);
        }
    };
    walk(1, Rational(1));
    return total;
}

// ----- exact policy enumeration ------------------------------------------
//
// Forward sweep over the joint law of (policy randomization x valuations),
// merging sample paths that agree on (policy state, remaining inventory).
// This is the independent oracle behind every exact-equality check.

struct ExactRunResult {
    Rational expected_revenue;
    std::vector<Rational> step_revenue;                 // index 1..T
    std::vector<std::vector<Rational>> inventory_dist;  // [t][k'] = Pr[I_t = k'], t = 0..T
};

using StateDist = std::map<std::pair<ExactPolicy::State, int>, Rational>;

struct SweepHooks {
    // state distribution at the start of step t (i.e. end of t-1), t = 1..T+1
    std::function<void(int t, const StateDist&)> before_step;
};

inline ExactRunResult exact_policy_run(const ValuationInstance& inst, ExactPolicy& policy,
                                       std::uint64_t cap = 1'000'000,
                                       const SweepHooks* hooks = nullptr) {
    if (!inst.is_exact())
        throw std::invalid_argument("exact enumeration requires exactly normalized arrivals");
    int m = inst.ladder().size();
    int T = inst.horizon();
    ExactRunResult out;
    out.expected_revenue = 0;
    out.step_revenue.assign(T + 1, Rational(0));
    out.inventory_dist.assign(T + 1, std::vector<Rational>(inst.k() + 1, Rational(0)));
    out.inventory_dist[0][inst.k()] = 1;

    StateDist current;
    current[{policy.initial(inst), inst.k()}] = 1;
    std::uint64_t work = 0;

    for (int t = 1; t <= T; ++t) {
        if (hooks && hooks->before_step) hooks->before_step(t, current);
        const Arrival& a = inst.arrival(t);
        StateDist next;
        for (const auto& [key, prob] : current) {
            const auto& [state, remaining] = key;
            RatDecision dec = policy.decide(inst, state, t, remaining);
            if (remaining == 0 && dec.p[m + 1] != 1)
                throw std::logic_error("exact run: policy priced with zero inventory at t=" +
                                       std::to_string(t));
            for (int j = 1; j <= m + 1; ++j) {
                if (dec.p[j] == 0) continue;
                for (int v = 0; v <= m; ++v) {
                    if (a.pmf[v] == 0) continue;
                    if (++work > cap)
                        throw CapExceeded("exact run: weighted-history cap exceeded");
                    bool purchased = j <= m && v >= j;
                    Rational branch = prob * dec.p[j] * a.pmf[v];
                    if (purchased) {
                        Rational gain = branch * inst.ladder().price(j);
                        out.step_revenue[t] += gain;
                        out.expected_revenue += gain;
                    }
                    ExactPolicy::State ns = policy.advance(inst, state, t, j, purchased, v);
                    next[{std::move(ns), remaining - (purchased ? 1 : 0)}] += branch;
                }
            }
        }
        current = std::move(next);
        for (const auto& [key, prob] : current) out.inventory_dist[t][key.second] += prob;
    }
    if (hooks && hooks->before_step) hooks->before_step(T + 1, current);
    return out;
}

inline Rational exact_policy_revenue(const ValuationInstance& inst, ExactPolicy& policy,
                                     std::uint64_t cap = 1'000'000) {
    return exact_policy_run(inst, policy, cap).expected_revenue;
}

}  // namespace slrm
