#include <catch2/catch_amalgamated.hpp>

#include "slrm/exact_policies.hpp"
#include "slrm/tracking.hpp"
#include "slrm/verify.hpp"

using namespace slrm;

namespace {
const PriceLadder& p124() {
    static PriceLadder ladder = PriceLadder::parse("1,2,4");
    return ladder;
}
}  // namespace

TEST_CASE("poisson binomial against subset brute force") {
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 1 + static_cast<int>(rng.next_u64() % 5);
        std::vector<Rational> means(n);
        for (auto& p : means)
            p = Rational(static_cast<int>(rng.next_u64() % 7), 6);
        auto pmf = poisson_binomial_pmf(means);
        std::vector<Rational> brute(n + 1, Rational(0));
        for (int mask = 0; mask < (1 << n); ++mask) {
            Rational prob = 1;
            int ones = 0;
            for (int i = 0; i < n; ++i) {
                bool on = mask & (1 << i);
                prob *= on ? means[i] : 1 - means[i];
                ones += on;
            }
            brute[ones] += prob;
        }
        CHECK(pmf == brute);
        // conditional law agrees with the Bayes brute force
        for (int count = 0; count <= n; ++count) {
            Rational joint = 0;
            for (int mask = 0; mask < (1 << n); ++mask) {
                if (!(mask & 1)) continue;
                Rational prob = 1;
                int ones = 0;
                for (int i = 0; i < n; ++i) {
                    bool on = mask & (1 << i);
                    prob *= on ? means[i] : 1 - means[i];
                    ones += on;
                }
                if (ones == count) joint += prob;
            }
            auto cond = conditional_success_prob(means, 0, count);
            if (brute[count] == 0)
                CHECK_FALSE(cond.has_value());
            else
                CHECK(*cond == joint / brute[count]);
        }
    }
}

TEST_CASE("stacking walkthrough state and decision") {
    // five customers 4,1,4,1,2 on {1,2,4} with k=5: levels become 4,1,4,1,2
    ValuationInstance warmup = ValuationInstance::deterministic(p124(), 5, {3, 1, 3, 1, 2});
    DetTrackInfo track = deterministic_track(warmup);
    CHECK(track.levels_final == std::vector<int>{3, 1, 3, 1, 2});

    // customer #6 goes to unit 2 (level 1); if that unit is unsold the offer
    // is 2 or 4, each with probability 1/2
    TrackingState st;
    st.reset(5);
    st.level = {3, 1, 3, 1, 2};
    st.sold = {1, 0, 1, 0, 1};
    st.remaining = 2;
    CHECK(st.argmin_unit() == 1);
    Decision d = a1_decision(st, p124());
    CHECK(d.p[2] == Catch::Approx(0.5));
    CHECK(d.p[3] == Catch::Approx(0.5));
    CHECK(d.p[4] == 0.0);

    // fresh state: the full skimming distribution, no reject mass
    TrackingState fresh;
    fresh.reset(3);
    Decision d0 = a1_decision(fresh, p124());
    CHECK(d0.p[1] == Catch::Approx(0.5));
    CHECK(d0.p[2] == Catch::Approx(0.25));
    CHECK(d0.p[3] == Catch::Approx(0.25));
    CHECK(d0.p[4] == 0.0);

    // a unit that bought at the top price rejects forever after
    TrackingState top;
    top.reset(1);
    a1_observe(top, 3, true);
    CHECK(a1_decision(top, p124()).p[4] == 1.0);

    // sold probabilities by level: 0, 1/2, 3/4, 1
    CHECK(p124().sold_prob_at_level(0) == Rational(0));
    CHECK(p124().sold_prob_at_level(1) == Rational(1, 2));
    CHECK(p124().sold_prob_at_level(2) == Rational(3, 4));
    CHECK(p124().sold_prob_at_level(3) == Rational(1));
}

TEST_CASE("customer six earns exactly half the optimum gain") {
    ValuationInstance inst = ValuationInstance::deterministic(p124(), 5, {3, 1, 3, 1, 2, 2});
    ExactVt vt;
    ExactRunResult run = exact_policy_run(inst, vt);
    CHECK(run.step_revenue[6] == Rational(1, 2));
    CHECK(run.expected_revenue == Rational(13, 2));
}

TEST_CASE("conditional reject probabilities") {
    // unit levels (0,1,2,4): unconditional sold probabilities (0,1/2,3/4,1)
    std::vector<Rational> means;
    for (int level : {0, 1, 2, 3}) means.push_back(p124().sold_prob_at_level(level));
    CHECK(means == std::vector<Rational>{Rational(0), Rational(1, 2), Rational(3, 4), Rational(1)});

    // nothing sold yet: the tracked unit (level 0) is certainly unsold
    auto g = conditional_success_prob(means, 0, 0);
    REQUIRE(g);
    CHECK(*g == Rational(0));

    // impossible sold-count: unreachable
    CHECK_FALSE(conditional_success_prob(means, 0, 4).has_value());  // unit 0 can't be sold

    // marginalizing the conditional law recovers the unconditional one
    ValuationInstance inst = ValuationInstance::deterministic(p124(), 3, {2, 1, 3, 2});
    A1Analysis analysis = analyze_a1_exact(inst);
    GammaTables gt = gamma_tables_exact(inst);
    for (int t = 1; t <= inst.horizon(); ++t) {
        Rational marginal = 0;
        for (int kp = 0; kp <= inst.k(); ++kp) {
            if (!gt.gamma[t][kp]) continue;
            marginal += analysis.run.inventory_dist[t - 1][kp] * (*gt.gamma[t][kp]);
        }
        CHECK(marginal == gt.uncond[t]);
    }
}

TEST_CASE("max-price variant moves reject mass to the top price") {
    ValuationInstance inst = ValuationInstance::deterministic(p124(), 2, {3, 3, 1});
    RatDecisionTable plain = conditional_decision_table(inst, false);
    RatDecisionTable maxed = conditional_decision_table(inst, true);
    for (int t = 1; t <= inst.horizon(); ++t) {
        for (int kp = 1; kp <= inst.k(); ++kp) {
            CHECK(maxed[t][kp].p[4] == 0);
            CHECK(maxed[t][kp].p[3] == plain[t][kp].p[3] + plain[t][kp].p[4]);
        }
        CHECK(maxed[t][0].p[4] == 1);  // stockout still rejects
    }
    // gamma = 1 with stock left: offer the top price with probability one
    GammaTables gt = gamma_tables_exact(inst);
    bool saw_certain = false;
    for (int t = 1; t <= inst.horizon(); ++t)
        for (int kp = 1; kp <= inst.k(); ++kp)
            if (gt.gamma[t][kp] && *gt.gamma[t][kp] == 1) {
                saw_certain = true;
                CHECK(maxed[t][kp].p[3] == 1);
            }
    CHECK(saw_certain);
}

TEST_CASE("exp tables restricted to deterministic valuations match the conditional variant") {
    ValuationInstance inst = ValuationInstance::deterministic(p124(), 2, {2, 3, 1, 2});
    RatDecisionTable exp = exp_decision_table(inst);
    RatDecisionTable cond = conditional_decision_table(inst, false);
    A1Analysis analysis = analyze_a1_exact(inst);
    for (int t = 1; t <= inst.horizon(); ++t)
        for (int kp = 0; kp <= inst.k(); ++kp)
            if (analysis.run.inventory_dist[t - 1][kp] != 0)
                CHECK(exp[t][kp].p == cond[t][kp].p);
}

TEST_CASE("exp inventory process matches the tracking procedure on stochastic instances") {
    Rng rng(17);
    for (int n = 0; n < 15; ++n) {
        ValuationInstance inst = random_exact_instance(rng, 3, 2, 4);
        A1Analysis analysis = analyze_a1_exact(inst);
        ChainResult chain = chain_run(inst, exp_decision_table(inst));
        for (int t = 0; t <= inst.horizon(); ++t)
            for (int kp = 0; kp <= inst.k(); ++kp)
                CHECK(chain.inventory_dist[t][kp] == analysis.run.inventory_dist[t][kp]);
    }
}

TEST_CASE("mutated skimming weights break the competitiveness identity") {
    // sanity check that the exact-equality suite can actually fail
    class MutantVt : public ExactVt {
    public:
        RatDecision decide(const ValuationInstance& inst, const State& s, int t,
                           int remaining) override {
            RatDecision d = ExactVt::decide(inst, s, t, remaining);
            int m = inst.ladder().size();
            int lo = -1, hi = -1;
            for (int j = 1; j <= m; ++j)
                if (d.p[j] != 0) {
                    if (lo < 0) lo = j;
                    hi = j;
                }
            if (lo >= 0 && lo != hi) std::swap(d.p[lo], d.p[hi]);  // off-by-one style corruption
            return d;
        }
    };
    ValuationInstance inst = ValuationInstance::deterministic(p124(), 1, {2});
    MutantVt mutant;
    Rational target = offline_opt(p124(), 1, {2}) * p124().ratio();
    CHECK(exact_policy_revenue(inst, mutant) != target);
    ExactVt honest;
    CHECK(exact_policy_revenue(inst, honest) == target);
}

TEST_CASE("broken-invariant guard: unsold unit at the top level") {
    TrackingState st;
    st.reset(1);
    st.level = {3};
    st.sold = {0};
    CHECK_THROWS_AS(a1_decision(st, p124()), std::logic_error);
}
