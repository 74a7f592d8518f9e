#pragma once

#include <memory>
#include <string>

#include "slrm/personalization.hpp"
#include "slrm/policies.hpp"
#include "slrm/tracking.hpp"

namespace slrm {

// Exact-rational counterparts of the policies whose decision law is a closed
// form of the visible history. Sampling-based policies (vt-samp, vt-p,
// vt-cont) have no exact per-step law and are deliberately absent.

class ExactFixedSkim : public ExactPolicy {
public:
    State initial(const ValuationInstance&) override { return {0}; }  // 0 = not drawn yet

    RatDecision decide(const ValuationInstance& inst, const State& s, int /*t*/,
                       int remaining) override {
        int m = inst.ladder().size();
        if (remaining == 0) return RatDecision::reject(m);
        if (s[0] == 0) {
            RatDecision d;
            d.p = inst.ladder().skimming(0);
            return d;
        }
        return RatDecision::degenerate(m, s[0]);
    }

    State advance(const ValuationInstance& inst, const State& s, int /*t*/, PriceIndex offered,
                  bool /*purchased*/, int /*valuation*/) override {
        if (s[0] == 0 && offered <= inst.ladder().size()) return {offered};
        return s;
    }
};

class ExactIndependentSkim : public ExactPolicy {
public:
    State initial(const ValuationInstance&) override { return {}; }
    RatDecision decide(const ValuationInstance& inst, const State&, int, int remaining) override {
        int m = inst.ladder().size();
        if (remaining == 0) return RatDecision::reject(m);
        RatDecision d;
        d.p = inst.ladder().skimming(0);
        return d;
    }
    State advance(const ValuationInstance&, const State&, int, PriceIndex, bool, int) override {
        return {};
    }
};

class ExactConservative : public ExactPolicy {
public:
    State initial(const ValuationInstance&) override { return {}; }
    RatDecision decide(const ValuationInstance& inst, const State&, int, int remaining) override {
        int m = inst.ladder().size();
        if (remaining == 0) return RatDecision::reject(m);
        return RatDecision::degenerate(m, m);
    }
    State advance(const ValuationInstance&, const State&, int, PriceIndex, bool, int) override {
        return {};
    }
};

class ExactMyopic : public ExactPolicy {
public:
    State initial(const ValuationInstance&) override { return {}; }
    RatDecision decide(const ValuationInstance& inst, const State&, int t, int remaining) override {
        int m = inst.ladder().size();
        if (remaining == 0) return RatDecision::reject(m);
        const Arrival& a = inst.arrival(t);
        int best = 1;
        Rational best_rev = inst.ladder().price(1) * a.tail[1];
        for (int j = 2; j <= m; ++j) {
            Rational rev = inst.ladder().price(j) * a.tail[j];
            if (rev >= best_rev) {
                best_rev = rev;
                best = j;
            }
        }
        return RatDecision::degenerate(m, best);
    }
    State advance(const ValuationInstance&, const State&, int, PriceIndex, bool, int) override {
        return {};
    }
};

class ExactBookingLimit : public ExactPolicy {
public:
    enum class Variant { plain, skim, personalized };
    explicit ExactBookingLimit(Variant v) : variant_(v) {}

    State initial(const ValuationInstance& inst) override {
        thresholds_ = booking_thresholds(inst.ladder(), inst.k());
        return {};
    }

    RatDecision decide(const ValuationInstance& inst, const State&, int t,
                       int remaining) override {
        int m = inst.ladder().size();
        if (remaining == 0) return RatDecision::reject(m);
        int base = booking_base_index(thresholds_, inst.k() - remaining);
        switch (variant_) {
            case Variant::plain:
                return RatDecision::degenerate(m, base);
            case Variant::skim: {
                RatDecision d;
                d.p = inst.ladder().skimming(base - 1);
                return d;
            }
            default:
                return personalize(RatDecision::degenerate(m, base), inst.arrival(t),
                                   inst.ladder());
        }
    }

    State advance(const ValuationInstance&, const State&, int, PriceIndex, bool, int) override {
        return {};
    }

private:
    Variant variant_;
    std::vector<long> thresholds_;
};

// Factory. Table-backed entries (vt-cond, vt-max, vt-exp) build their tables
// from the given instance up front.
inline std::unique_ptr<ExactPolicy> make_exact_policy(const std::string& id,
                                                      const ValuationInstance& inst,
                                                      std::uint64_t cap = 1'000'000) {
    if (id == "vt") return std::make_unique<ExactVt>();
    if (id == "ps") return std::make_unique<ExactFixedSkim>();
    if (id == "ips") return std::make_unique<ExactIndependentSkim>();
    if (id == "conservative") return std::make_unique<ExactConservative>();
    if (id == "myopic") return std::make_unique<ExactMyopic>();
    if (id == "bl") return std::make_unique<ExactBookingLimit>(ExactBookingLimit::Variant::plain);
    if (id == "bl-ps") return std::make_unique<ExactBookingLimit>(ExactBookingLimit::Variant::skim);
    if (id == "bl-p")
        return std::make_unique<ExactBookingLimit>(ExactBookingLimit::Variant::personalized);
    if (id == "vt-cond")
        return std::make_unique<ExactTablePolicy>(conditional_decision_table(inst, false));
    if (id == "vt-max")
        return std::make_unique<ExactTablePolicy>(conditional_decision_table(inst, true));
    if (id == "vt-exp") return std::make_unique<ExactTablePolicy>(exp_decision_table(inst, cap));
    throw std::invalid_argument("policy " + id + " has no exact decision law");
}

}  // namespace slrm
