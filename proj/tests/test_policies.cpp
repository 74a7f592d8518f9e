#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "slrm/exact_policies.hpp"
#include "slrm/policies.hpp"
#include "slrm/simulator.hpp"
#include "slrm/verify.hpp"
#include "test_util.hpp"

using namespace slrm;

namespace {
const PriceLadder& p124() {
    static PriceLadder ladder = PriceLadder::parse("1,2,4");
    return ladder;
}
}  // namespace

TEST_CASE("booking limit thresholds and base prices") {
    // {1,2,4}, k=4: price rises after 2 and 3 units sold
    auto thr = booking_thresholds(p124(), 4);
    CHECK(thr == std::vector<long>{2, 3});
    CHECK(booking_base_index(thr, 0) == 1);
    CHECK(booking_base_index(thr, 1) == 1);
    CHECK(booking_base_index(thr, 2) == 2);
    CHECK(booking_base_index(thr, 3) == 3);

    // k=1: ceil(1/2) = ceil(3/4) = 1, so the single unit always sells at 1
    auto thr1 = booking_thresholds(p124(), 1);
    CHECK(thr1 == std::vector<long>{1, 1});
    CHECK(booking_base_index(thr1, 0) == 1);

    // single-price ladder has no breakpoints
    CHECK(booking_thresholds(PriceLadder::parse("5"), 3).empty());
}

TEST_CASE("booking-limit skimming trace from the naive-combination example") {
    // two high customers then one low on {1,2,4} with k=4: expected revenue 4
    ValuationInstance inst = ValuationInstance::deterministic(p124(), 4, {3, 3, 1});
    ExactBookingLimit blps(ExactBookingLimit::Variant::skim);
    CHECK(exact_policy_revenue(inst, blps) == Rational(4));
    // while the clairvoyant takes 4 + 4 + 1
    CHECK(offline_opt(p124(), 4, {3, 3, 1}) == Rational(9));
}

TEST_CASE("fixed-price skimming equalities") {
    // one customer valued 4 on {1,2,4}: expected revenue (1/2)1 + (1/4)2 + (1/4)4 = 2
    ValuationInstance one = ValuationInstance::deterministic(p124(), 1, {3});
    ExactFixedSkim ps;
    CHECK(exact_policy_revenue(one, ps) == Rational(2));
    ExactIndependentSkim ips;
    CHECK(exact_policy_revenue(one, ips) == Rational(2));

    // E[ALG] = OPT/q on deterministic sequences (the fixed-price guarantee)
    ValuationInstance seq = ValuationInstance::deterministic(p124(), 2, {1, 3, 2, 3});
    CHECK(exact_policy_revenue(seq, ps) ==
          offline_opt(p124(), 2, {1, 3, 2, 3}) * p124().ratio());

    // single-price ladder: the draw is deterministic
    PriceLadder single = PriceLadder::parse("5");
    ValuationInstance s1 = ValuationInstance::deterministic(single, 1, {1, 0});
    CHECK(exact_policy_revenue(s1, ps) == Rational(5));
}

TEST_CASE("myopic and conservative decisions") {
    PriceLadder p1234 = PriceLadder::parse("1,2,3,4");
    // b = 1: price 1 maximizes p * exp(-b p)
    ValuationInstance inst(p1234, 2, {Arrival::from_pmf(loglinear_pmf(p1234, 1.0))});
    MyopicPolicy myopic;
    myopic.prepare(inst, 1);
    myopic.reset(1);
    Decision d = myopic.decide(1, 2);
    CHECK(d.p[1] == 1.0);

    // deterministic valuation r^(j): myopic offers exactly r^(j)
    for (int j = 1; j <= 3; ++j) {
        ValuationInstance det = ValuationInstance::deterministic(p124(), 1, {j});
        MyopicPolicy pol;
        pol.prepare(det, 1);
        pol.reset(1);
        CHECK(pol.decide(1, 1).p[j] == 1.0);
    }

    // conservative sells T < k top-valued customers at the top price
    ValuationInstance top = ValuationInstance::deterministic(p124(), 5, {3, 3, 3});
    ExactConservative cons;
    CHECK(exact_policy_revenue(top, cons) == Rational(12));
}

TEST_CASE("sampling budget constant") {
    // 6/(e pi^2 0.05) ~ 4.472 -> C = 5
    CHECK(6.0 / (std::exp(1.0) * M_PI * M_PI * 0.05) == Catch::Approx(4.472).margin(0.01));
    CHECK(VtSampPolicy::budget_constant(0.05) == 5);
    CHECK(VtSampPolicy::budget_constant(0.01) == 23);

    PolicyOptions opts;
    opts.epsilon = 0.7;  // above c*({1,2,4}) = 1/2
    VtSampPolicy bad(opts);
    ValuationInstance inst = ValuationInstance::deterministic(p124(), 1, {1});
    CHECK_THROWS_AS(bad.prepare(inst, 1), std::invalid_argument);
}

TEST_CASE("sampling emulation matches the conditional law on deterministic valuations") {
    // With degenerate distributions the matched run's offer law collapses to
    // the conditional variant's: gamma * reject + (1-gamma) * skim.
    ValuationInstance inst = ValuationInstance::deterministic(p124(), 2, {2, 1, 3});
    RatDecisionTable cond = conditional_decision_table(inst, false);
    A1Analysis analysis = analyze_a1_exact(inst);
    PolicyOptions opts;
    VtSampPolicy samp(opts);
    samp.prepare(inst, 5);
    int t = 3;
    for (int kp = 1; kp <= 2; ++kp) {
        if (analysis.run.inventory_dist[t - 1][kp] == 0) continue;
        std::vector<double> freq(p124().size() + 2, 0.0);
        int draws = 20000;
        samp.reset(123 + kp);
        for (int n = 0; n < draws; ++n) {
            Decision d = samp.decide(t, kp);
            int offered = samp.rng().sample(d.p);
            freq[offered] += 1.0 / draws;
        }
        for (int j = 1; j <= p124().size() + 1; ++j)
            CHECK(freq[j] == Catch::Approx(to_double(cond[t][kp].p[j])).margin(0.02));
    }
}

TEST_CASE("exact conditional policy refuses oversized instances") {
    ExperimentGrid grid{PriceLadder::parse("1,2,3,4"), {6}, {4}, 1, 1.0 / 3, 4.0 / 3, 9};
    ValuationInstance big = generate_grid(grid)[0];
    PolicyOptions opts;
    opts.exp_cap = 10'000;
    VtExpPolicy exp(opts);
    CHECK_THROWS_AS(exp.prepare(big, 1), CapExceeded);
}

TEST_CASE("every policy rejects at zero inventory") {
    ExperimentGrid grid{PriceLadder::parse("1,2,3,4"), {2}, {2}, 1, 1.0 / 3, 4.0 / 3, 4};
    ValuationInstance inst = generate_grid(grid)[0];
    PolicyOptions opts;
    opts.vt_samples = 50;
    for (const auto& id : all_policy_ids()) {
        auto policy = make_policy(id, opts);
        policy->prepare(inst, 11);
        policy->reset(12);
        Decision d = policy->decide(1, 0);
        INFO(id);
        CHECK_FALSE(d.continuous.has_value());
        CHECK(d.p[inst.ladder().size() + 1] == 1.0);
    }
}

TEST_CASE("failure fixture: booking limits lose, tracking does not") {
    ValuationInstance inst = testutil::appendix_a_instance();
    Rational opt = expected_opt_exact(inst);
    CHECK(opt == Rational(123, 25));  // 4.92 at eps = 0.01, approaching 5 as eps -> 0

    // the personalized booking-limit policy holds price 1 for the first two
    // customers, then rejects the third: expected revenue exactly 2
    ExactBookingLimit blp(ExactBookingLimit::Variant::personalized);
    Rational blp_rev = exact_policy_revenue(inst, blp);
    CHECK(blp_rev == Rational(2));
    CHECK(blp_rev < opt * p124().ratio());  // strictly below the guarantee

    // the conditional tracking law earns exactly OPT/2
    ExactTablePolicy exp(exp_decision_table(inst));
    CHECK(exact_policy_revenue(inst, exp) == opt * p124().ratio());
}

TEST_CASE("personalized skimming policies preserve the base draw semantics") {
    // ps-p on a degenerate-valuation instance upgrades the drawn price to the
    // customer's exact valuation when profitable
    ValuationInstance inst = ValuationInstance::deterministic(p124(), 2, {3, 3});
    PersonalizedFixedSkimPolicy psp;
    psp.prepare(inst, 3);
    psp.reset(4);
    Decision d = psp.decide(1, 2);
    // whatever was drawn, all offer mass sits on the valuation price 4
    CHECK(d.p[3] == Catch::Approx(1.0));
}
