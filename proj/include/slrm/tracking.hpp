#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "slrm/exact.hpp"
#include "slrm/instances.hpp"
#include "slrm/poisson_binomial.hpp"
#include "slrm/policy.hpp"
#include "slrm/price_ladder.hpp"

namespace slrm {

// ----- the tracking procedure, runtime form -------------------------------
//
// Each arrival is assigned to the inventory unit with the smallest level
// (lowest index on ties). The level is raised to the valuation whether or not
// a sale happened; a unit whose assigned customer bought is dead thereafter.

struct TrackingState {
    std::vector<int> level;  // price index 0..m per unit
    std::vector<char> sold;
    int remaining = 0;

    void reset(int k) {
        level.assign(k, 0);
        sold.assign(k, 0);
        remaining = k;
    }

    int argmin_unit() const {
        int best = 0;
        for (int i = 1; i < static_cast<int>(level.size()); ++i)
            if (level[i] < level[best]) best = i;
        return best;
    }
};

inline Decision a1_decision(const TrackingState& st, const PriceLadder& ladder) {
    int i = st.argmin_unit();
    if (st.sold[i]) return Decision::reject(ladder.size());
    if (st.level[i] == ladder.size())
        throw std::logic_error("tracking: unsold unit at the top level (broken invariant)");
    Decision d;
    d.p = ladder.skimming_d(st.level[i]);
    return d;
}

inline void a1_observe(TrackingState& st, int valuation, bool purchased) {
    int i = st.argmin_unit();
    st.level[i] = std::max(st.level[i], valuation);
    if (purchased) {
        st.sold[i] = 1;
        --st.remaining;
    }
}

// One full step of a sampled inner run: draw the price, apply the purchase
// rule for the given valuation, update. Returns {price index, purchased}.
inline std::pair<int, bool> a1_step(TrackingState& st, const PriceLadder& ladder, int valuation,
                                    Rng& rng) {
    Decision d = a1_decision(st, ladder);
    int offered = rng.sample(d.p);
    bool purchased = offered <= ladder.size() && valuation >= offered;
    a1_observe(st, valuation, purchased);
    return {offered, purchased};
}

// ----- exact form for the enumeration oracle ------------------------------

// State layout: [level_1..level_k, sold_1..sold_k].
class ExactVt : public ExactPolicy {
public:
    State initial(const ValuationInstance& inst) override {
        return State(2 * inst.k(), 0);
    }

    RatDecision decide(const ValuationInstance& inst, const State& s, int /*t*/,
                       int /*remaining*/) override {
        int k = inst.k();
        int i = argmin(s, k);
        if (s[k + i]) return RatDecision::reject(inst.ladder().size());
        if (s[i] == inst.ladder().size())
            throw std::logic_error("tracking: unsold unit at the top level (broken invariant)");
        RatDecision d;
        d.p = inst.ladder().skimming(s[i]);
        return d;
    }

    State advance(const ValuationInstance& inst, const State& s, int /*t*/, PriceIndex /*offered*/,
                  bool purchased, int valuation) override {
        int k = inst.k();
        State ns = s;
        int i = argmin(ns, k);
        ns[i] = std::max(ns[i], valuation);
        if (purchased) ns[k + i] = 1;
        return ns;
    }

    static int argmin(const State& s, int k) {
        int best = 0;
        for (int i = 1; i < k; ++i)
            if (s[i] < s[best]) best = i;
        return best;
    }
};

// Decision tables indexed by [t][k'] (t = 1..T, k' = 0..k): policies whose
// choice depends on the history only through the remaining inventory.
using RatDecisionTable = std::vector<std::vector<RatDecision>>;

class ExactTablePolicy : public ExactPolicy {
public:
    explicit ExactTablePolicy(RatDecisionTable table) : table_(std::move(table)) {}

    State initial(const ValuationInstance&) override { return {}; }
    RatDecision decide(const ValuationInstance&, const State&, int t, int remaining) override {
        return table_[t][remaining];
    }
    State advance(const ValuationInstance&, const State&, int, PriceIndex, bool, int) override {
        return {};
    }

private:
    RatDecisionTable table_;
};

// ----- full enumeration of the tracking procedure -------------------------

struct A1Analysis {
    ExactRunResult run;
    // sold_marginal[t][i] = Pr[unit i sold by end of t], t = 0..T
    std::vector<std::vector<Rational>> sold_marginal;
    // cond_price[t][k'] = Pr[P_t = . | I_{t-1} = k']; nullopt when the
    // conditioning event has probability zero
    std::vector<std::vector<std::optional<RatDecision>>> cond_price;
};

inline A1Analysis analyze_a1_exact(const ValuationInstance& inst,
                                   std::uint64_t cap = 1'000'000) {
    int k = inst.k();
    int m = inst.ladder().size();
    int T = inst.horizon();
    A1Analysis out;
    out.sold_marginal.assign(T + 1, std::vector<Rational>(k, Rational(0)));
    out.cond_price.assign(T + 1, std::vector<std::optional<RatDecision>>(k + 1));
    std::vector<std::vector<Rational>> inv_mass(T + 2, std::vector<Rational>(k + 1, Rational(0)));
    std::vector<std::vector<std::vector<Rational>>> price_mass(
        T + 1, std::vector<std::vector<Rational>>(k + 1, std::vector<Rational>(m + 2, Rational(0))));

    ExactVt vt;
    SweepHooks hooks;
    hooks.before_step = [&](int t, const StateDist& dist) {
        for (const auto& [key, prob] : dist) {
            const auto& [state, remaining] = key;
            for (int i = 0; i < k; ++i)
                if (state[k + i]) out.sold_marginal[t - 1][i] += prob;
            if (t <= T) {
                inv_mass[t][remaining] += prob;
                RatDecision dec = vt.decide(inst, state, t, remaining);
                for (int j = 1; j <= m + 1; ++j)
                    price_mass[t][remaining][j] += prob * dec.p[j];
            }
        }
    };
    out.run = exact_policy_run(inst, vt, cap, &hooks);

    for (int t = 1; t <= T; ++t) {
        for (int kp = 0; kp <= k; ++kp) {
            if (inv_mass[t][kp] == 0) continue;
            RatDecision dec;
            dec.p.assign(m + 2, Rational(0));
            for (int j = 1; j <= m + 1; ++j) dec.p[j] = price_mass[t][kp][j] / inv_mass[t][kp];
            out.cond_price[t][kp] = std::move(dec);
        }
    }
    return out;
}

// Conditional price tables of the exponential-time conditional policy: equal
// to the tracking procedure's conditional law, with reject on zero-probability
// inventory states.
inline RatDecisionTable exp_decision_table(const ValuationInstance& inst,
                                           std::uint64_t cap = 1'000'000) {
    A1Analysis analysis = analyze_a1_exact(inst, cap);
    int T = inst.horizon();
    int m = inst.ladder().size();
    RatDecisionTable table(T + 1, std::vector<RatDecision>(inst.k() + 1, RatDecision::reject(m)));
    for (int t = 1; t <= T; ++t)
        for (int kp = 0; kp <= inst.k(); ++kp)
            if (analysis.cond_price[t][kp]) table[t][kp] = *analysis.cond_price[t][kp];
    return table;
}

// ----- deterministic-valuation machinery -----------------------------------

// The unit assignment and levels of the tracking procedure are deterministic
// once the valuations are; replay them without touching sale randomness.
struct DetTrackInfo {
    std::vector<int> i_star;                      // [t], 1..T
    std::vector<int> floor;                       // [t] level index of the tracked unit
    std::vector<std::vector<int>> levels_before;  // [t] levels at the start of t
    std::vector<int> levels_final;
};

inline DetTrackInfo deterministic_track(const ValuationInstance& inst) {
    if (!inst.all_deterministic())
        throw std::invalid_argument("deterministic tracking replay needs deterministic valuations");
    int k = inst.k();
    int T = inst.horizon();
    DetTrackInfo info;
    info.i_star.assign(T + 1, -1);
    info.floor.assign(T + 1, -1);
    info.levels_before.assign(T + 1, {});
    std::vector<int> level(k, 0);
    for (int t = 1; t <= T; ++t) {
        info.levels_before[t] = level;
        int i = 0;
        for (int u = 1; u < k; ++u)
            if (level[u] < level[i]) i = u;
        info.i_star[t] = i;
        info.floor[t] = level[i];
        level[i] = std::max(level[i], inst.arrival(t).det_index);
    }
    info.levels_final = level;
    return info;
}

// Reject probabilities of the inventory-conditional variant, computed by the
// Bayes / Poisson-binomial route (the per-unit sold indicators of the tracking
// procedure are independent Bernoullis with known means).
struct GammaTables {
    // gamma[t][k'] = Pr[tracked unit sold | I_{t-1} = k']; nullopt = unreachable
    std::vector<std::vector<std::optional<Rational>>> gamma;
    std::vector<Rational> uncond;  // unconditional sold prob of the tracked unit
    DetTrackInfo track;
};

inline GammaTables gamma_tables_exact(const ValuationInstance& inst) {
    GammaTables out;
    out.track = deterministic_track(inst);
    int k = inst.k();
    int T = inst.horizon();
    const PriceLadder& ladder = inst.ladder();
    out.gamma.assign(T + 1, std::vector<std::optional<Rational>>(k + 1));
    out.uncond.assign(T + 1, Rational(0));
    for (int t = 1; t <= T; ++t) {
        std::vector<Rational> means(k);
        for (int i = 0; i < k; ++i)
            means[i] = ladder.sold_prob_at_level(out.track.levels_before[t][i]);
        int i_star = out.track.i_star[t];
        out.uncond[t] = means[i_star];
        for (int kp = 0; kp <= k; ++kp)
            out.gamma[t][kp] = conditional_success_prob(means, i_star, k - kp);
    }
    return out;
}

// Decision tables for the conditional variant and for its max-price
// modification (reject mass re-offered at the top price while stock remains).
inline RatDecisionTable conditional_decision_table(const ValuationInstance& inst,
                                                   bool max_price_variant) {
    GammaTables gt = gamma_tables_exact(inst);
    int k = inst.k();
    int m = inst.ladder().size();
    int T = inst.horizon();
    RatDecisionTable table(T + 1, std::vector<RatDecision>(k + 1, RatDecision::reject(m)));
    for (int t = 1; t <= T; ++t) {
        for (int kp = 0; kp <= k; ++kp) {
            if (kp == 0 || !gt.gamma[t][kp]) continue;  // stockout / unreachable: reject
            Rational gamma = *gt.gamma[t][kp];
            RatDecision dec;
            if (gamma == 1) {
                dec = RatDecision::reject(m);
            } else {
                dec.p = inst.ladder().skimming(gt.track.floor[t]);
                for (auto& p : dec.p) p *= (1 - gamma);
                dec.p[m + 1] = gamma;
            }
            if (max_price_variant && dec.p[m + 1] != 0) {
                dec.p[m] += dec.p[m + 1];
                dec.p[m + 1] = 0;
            }
            table[t][kp] = std::move(dec);
        }
    }
    return table;
}

// ----- inventory-state Markov chain ---------------------------------------
//
// Exact evaluation of any table policy: the remaining inventory is a Markov
// chain once decisions depend on the history only through it.

struct ChainResult {
    Rational expected_revenue;
    std::vector<Rational> step_revenue;                 // [t]
    std::vector<Rational> step_consumption;             // [t] Pr[sale at t]
    std::vector<std::vector<Rational>> inventory_dist;  // [t][k'], t = 0..T
};

inline ChainResult chain_run(const ValuationInstance& inst, const RatDecisionTable& table) {
    int k = inst.k();
    int m = inst.ladder().size();
    int T = inst.horizon();
    ChainResult out;
    out.expected_revenue = 0;
    out.step_revenue.assign(T + 1, Rational(0));
    out.step_consumption.assign(T + 1, Rational(0));
    out.inventory_dist.assign(T + 1, std::vector<Rational>(k + 1, Rational(0)));
    out.inventory_dist[0][k] = 1;
    std::vector<Rational> pi = out.inventory_dist[0];
    for (int t = 1; t <= T; ++t) {
        const Arrival& a = inst.arrival(t);
        std::vector<Rational> next(k + 1, Rational(0));
        for (int kp = 0; kp <= k; ++kp) {
            if (pi[kp] == 0) continue;
            const RatDecision& dec = table[t][kp];
            if (kp == 0 && dec.p[m + 1] != 1)
                throw std::logic_error("chain: table prices with zero inventory");
            Rational sale = 0, revenue = 0;
            for (int j = 1; j <= m; ++j) {
                if (dec.p[j] == 0) continue;
                sale += dec.p[j] * a.tail[j];
                revenue += dec.p[j] * a.tail[j] * inst.ladder().price(j);
            }
            out.step_consumption[t] += pi[kp] * sale;
            out.step_revenue[t] += pi[kp] * revenue;
            if (kp > 0) next[kp - 1] += pi[kp] * sale;
            next[kp] += pi[kp] * (1 - sale);
        }
        out.expected_revenue += out.step_revenue[t];
        pi = std::move(next);
        out.inventory_dist[t] = pi;
    }
    return out;
}

}  // namespace slrm
