#pragma once

#include <stdexcept>
#include <vector>

#include "slrm/policy.hpp"
#include "slrm/price_ladder.hpp"
#include "slrm/tracking.hpp"

namespace slrm {

// Personalization LP: given a base price distribution and the arriving
// customer's tail probabilities w_j = Pr[V >= r^(j)], maximize expected
// revenue subject to keeping the purchase probability identical:
//
//   max  sum_j r_j w_j p_j
//   s.t. sum_j w_j p_j = sum_j w_j base_j,   sum_j p_j <= 1,   p >= 0.
//
// Two constraints, so an optimal vertex has support at most two; solved by
// enumerating single- and pair-support candidates. Starts from the (feasible)
// base solution, so the result never falls below it.
//
// Vectors use the standard layout: index j in 1..m+1, entry m+1 = reject
// (consumes nothing and is excluded from the LP); the leftover 1 - sum p_j is
// returned as reject mass.
template <class S>
std::vector<S> personalize_lp(const std::vector<S>& base, const std::vector<S>& tail,
                              const PriceLadder& ladder,
                              const std::vector<S>& prices) {
    int m = ladder.size();
    S target = S(0), best_obj = S(0);
    for (int j = 1; j <= m; ++j) {
        target += tail[j] * base[j];
        best_obj += prices[j] * tail[j] * base[j];
    }
    std::vector<S> best(base.begin(), base.end());
    auto consider = [&](const std::vector<S>& cand) {
        S obj = S(0);
        for (int j = 1; j <= m; ++j) obj += prices[j] * tail[j] * cand[j];
        if (obj > best_obj) {
            best_obj = obj;
            best = cand;
        }
    };

    if (target == S(0)) {
        // nothing to trade: any zero-consumption vector earns zero
        std::vector<S> none(m + 2, S(0));
        none[m + 1] = S(1);
        return none;
    }

    std::vector<S> cand(m + 2, S(0));
    // single support: p_j = target / w_j, needs target <= w_j
    for (int j = 1; j <= m; ++j) {
        if (tail[j] <= S(0) || tail[j] < target) continue;
        std::fill(cand.begin(), cand.end(), S(0));
        cand[j] = target / tail[j];
        consider(cand);
    }
    // pair support with p_a + p_b = 1
    for (int a = 1; a <= m; ++a) {
        for (int b = a + 1; b <= m; ++b) {
            if (tail[a] == tail[b]) continue;
            S pa = (target - tail[b]) / (tail[a] - tail[b]);
            if (pa < S(0) || pa > S(1)) continue;
            std::fill(cand.begin(), cand.end(), S(0));
            cand[a] = pa;
            cand[b] = S(1) - pa;
            consider(cand);
        }
    }

    S offered = S(0);
    for (int j = 1; j <= m; ++j) offered += best[j];
    best[m + 1] = S(1) - offered;
    if (best[m + 1] < S(0)) best[m + 1] = S(0);  // fp guard; exact path never hits
    return best;
}

inline RatDecision personalize(const RatDecision& base, const Arrival& arrival,
                               const PriceLadder& ladder) {
    std::vector<Rational> prices(ladder.size() + 2, Rational(0));
    for (int j = 1; j <= ladder.size(); ++j) prices[j] = ladder.price(j);
    RatDecision out;
    out.p = personalize_lp<Rational>(base.p, arrival.tail, ladder, prices);
    return out;
}

inline Decision personalize(const Decision& base, const Arrival& arrival,
                            const PriceLadder& ladder) {
    std::vector<double> prices(ladder.size() + 2, 0.0);
    for (int j = 1; j <= ladder.size(); ++j) prices[j] = ladder.price_d(j);
    Decision out;
    out.p = personalize_lp<double>(base.p, arrival.tail_d, ladder, prices);
    return out;
}

// Table policies get wrapped entry by entry (degenerate arrivals included).
inline RatDecisionTable personalize_table(const RatDecisionTable& table,
                                          const ValuationInstance& inst) {
    RatDecisionTable out = table;
    for (int t = 1; t <= inst.horizon(); ++t)
        for (int kp = 1; kp <= inst.k(); ++kp)
            out[t][kp] = personalize(table[t][kp], inst.arrival(t), inst.ladder());
    return out;
}

}  // namespace slrm
