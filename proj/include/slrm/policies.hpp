#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "slrm/oracles.hpp"
#include "slrm/personalization.hpp"
#include "slrm/policy.hpp"
#include "slrm/tracking.hpp"

namespace slrm {

// ----- valuation tracking (Algorithm family) -------------------------------

class VtPolicy : public Policy {
public:
    std::string id() const override { return "vt"; }

    void reset(std::uint64_t seed) override {
        Policy::reset(seed);
        st_.reset(inst_->k());
    }

    Decision decide(int /*t*/, int remaining) override {
        if (remaining == 0) return Decision::reject(inst_->ladder().size());
        return a1_decision(st_, inst_->ladder());
    }

    void observe(const Observation& ob) override { a1_observe(st_, ob.valuation_index, ob.purchased); }

private:
    TrackingState st_;
};

// Inventory-conditional variant: same deterministic assignment of arrivals to
// units, but the reject decision uses the probability that the tracked unit
// is sold given only the remaining inventory (Bayes over the independent
// per-unit sold indicators). With the max-price flag, reject mass is
// re-offered at the top price while stock remains.
class VtConditionalPolicy : public Policy {
public:
    explicit VtConditionalPolicy(bool max_price) : max_price_(max_price) {}

    std::string id() const override { return max_price_ ? "vt-max" : "vt-cond"; }

    void reset(std::uint64_t seed) override {
        Policy::reset(seed);
        level_.assign(inst_->k(), 0);
    }

    Decision decide(int /*t*/, int remaining) override {
        const PriceLadder& ladder = inst_->ladder();
        int m = ladder.size();
        if (remaining == 0) return Decision::reject(m);
        int k = inst_->k();
        std::vector<double> means(k);
        for (int i = 0; i < k; ++i) means[i] = ladder.sold_prob_at_level_d(level_[i]);
        int i_star = 0;
        for (int i = 1; i < k; ++i)
            if (level_[i] < level_[i_star]) i_star = i;
        auto gamma = conditional_success_prob<double>(means, i_star, k - remaining);
        Decision d;
        if (!gamma || *gamma >= 1.0) {
            d = Decision::reject(m);
        } else {
            d.p = ladder.skimming_d(level_[i_star]);
            for (auto& p : d.p) p *= (1.0 - *gamma);
            d.p[m + 1] = *gamma;
        }
        if (max_price_ && d.p[m + 1] > 0.0) {
            d.p[m] += d.p[m + 1];
            d.p[m + 1] = 0.0;
        }
        return d;
    }

    void observe(const Observation& ob) override {
        int i_star = 0;
        for (int i = 1; i < static_cast<int>(level_.size()); ++i)
            if (level_[i] < level_[i_star]) i_star = i;
        level_[i_star] = std::max(level_[i_star], ob.valuation_index);
    }

private:
    bool max_price_;
    std::vector<int> level_;
};

// Exact conditional policy for stochastic valuations: enumerates the tracking
// procedure over all histories. Exponential; prepare() throws CapExceeded
// above the configured cap, in which case the sampling policy stands in.
class VtExpPolicy : public Policy {
public:
    explicit VtExpPolicy(const PolicyOptions& opts) : opts_(opts) {}

    std::string id() const override { return "vt-exp"; }

    void prepare(const ValuationInstance& inst, std::uint64_t seed) override {
        Policy::prepare(inst, seed);
        RatDecisionTable exact = exp_decision_table(inst, opts_.exp_cap);
        table_.clear();
        for (const auto& row : exact) {
            std::vector<Decision> drow;
            drow.reserve(row.size());
            for (const auto& dec : row) drow.push_back(dec.to_double());
            table_.push_back(std::move(drow));
        }
    }

    Decision decide(int t, int remaining) override { return table_[t][remaining]; }

private:
    PolicyOptions opts_;
    std::vector<std::vector<Decision>> table_;
};

// Polynomial-time emulation by sampling: rerun the tracking procedure with
// freshly drawn valuations until a run lands on the current inventory, then
// copy that run's price distribution. At most C(k+1)t^2 tries per arrival
// with C = ceil(6 / (e pi^2 eps)); on exhaustion the arrival is rejected.
class VtSampPolicy : public Policy {
public:
    explicit VtSampPolicy(const PolicyOptions& opts) : epsilon_(opts.epsilon) {}

    std::string id() const override { return "vt-samp"; }

    static int budget_constant(double epsilon) {
        return static_cast<int>(std::ceil(6.0 / (std::exp(1.0) * M_PI * M_PI * epsilon)));
    }

    void prepare(const ValuationInstance& inst, std::uint64_t seed) override {
        Policy::prepare(inst, seed);
        double cstar = inst.ladder().ratio_d();
        if (!(epsilon_ > 0.0) || !(epsilon_ < cstar))
            throw std::invalid_argument("vt-samp: epsilon must lie in (0, c*(P))");
        C_ = budget_constant(epsilon_);
    }

    Decision decide(int t, int remaining) override {
        int k = inst_->k();
        if (remaining == 0) return Decision::reject(inst_->ladder().size());
        long long budget = static_cast<long long>(C_) * (k + 1) * t * static_cast<long long>(t);
        TrackingState run;
        for (long long tries = 0; tries < budget; ++tries) {
            run.reset(k);
            for (int s = 1; s < t; ++s)
                a1_step(run, inst_->ladder(), inst_->sample_valuation(s, rng()), rng());
            if (run.remaining == remaining) return a1_decision(run, inst_->ladder());
        }
        return Decision::reject(inst_->ladder().size());
    }

private:
    double epsilon_;
    int C_ = 0;
};

// The personalized tracking policy of the experiments: estimate the
// inventory-conditional price law of the tracking procedure from sampled
// runs (1000 per step by default), re-offer reject mass at the top price,
// then improve against the revealed valuation distribution with the
// personalization LP. The estimate for step t depends on arrivals 1..t-1
// only, so the whole table is built once per instance and shared by
// replications.
class VtPersonalizedPolicy : public Policy {
public:
    explicit VtPersonalizedPolicy(const PolicyOptions& opts) : samples_(opts.vt_samples) {}

    std::string id() const override { return "vt-p"; }

    void prepare(const ValuationInstance& inst, std::uint64_t seed) override {
        Policy::prepare(inst, seed);
        const PriceLadder& ladder = inst.ladder();
        int k = inst.k(), m = ladder.size(), T = inst.horizon();
        std::vector<std::vector<long>> count(T + 1, std::vector<long>(k + 1, 0));
        std::vector<std::vector<std::vector<double>>> mass(
            T + 1, std::vector<std::vector<double>>(k + 1, std::vector<double>(m + 2, 0.0)));
        Rng rng(seed);
        TrackingState run;
        for (int n = 0; n < samples_; ++n) {
            run.reset(k);
            for (int t = 1; t <= T; ++t) {
                Decision d = a1_decision(run, ladder);
                ++count[t][run.remaining];
                for (int j = 1; j <= m + 1; ++j) mass[t][run.remaining][j] += d.p[j];
                int offered = rng.sample(d.p);
                int v = inst.sample_valuation(t, rng);
                bool purchased = offered <= m && v >= offered;
                a1_observe(run, v, purchased);
            }
        }
        table_.assign(T + 1, std::vector<Decision>(k + 1, Decision::reject(m)));
        for (int t = 1; t <= T; ++t) {
            for (int kp = 1; kp <= k; ++kp) {
                Decision base = Decision::reject(m);
                if (count[t][kp] > 0)
                    for (int j = 1; j <= m + 1; ++j)
                        base.p[j] = mass[t][kp][j] / count[t][kp];
                base.p[m] += base.p[m + 1];  // never shut off demand while stocked
                base.p[m + 1] = 0.0;
                table_[t][kp] = personalize(base, inst.arrival(t), ladder);
            }
        }
    }

    Decision decide(int t, int remaining) override { return table_[t][remaining]; }

private:
    int samples_;
    std::vector<std::vector<Decision>> table_;
};

// ----- price skimming ------------------------------------------------------

// Random fixed price: one draw from the skimming weights, held forever.
class FixedSkimPolicy : public Policy {
public:
    std::string id() const override { return "ps"; }

    void reset(std::uint64_t seed) override {
        Policy::reset(seed);
        fixed_ = -1;
    }

    Decision decide(int /*t*/, int remaining) override {
        int m = inst_->ladder().size();
        if (remaining == 0) return Decision::reject(m);
        if (fixed_ < 0) {
            Decision d;
            d.p = inst_->ladder().skimming_d(0);
            return d;
        }
        return Decision::degenerate(m, fixed_);
    }

    void observe(const Observation& ob) override {
        if (fixed_ < 0 && ob.offered <= inst_->ladder().size()) fixed_ = ob.offered;
    }

private:
    int fixed_ = -1;
};

class IndependentSkimPolicy : public Policy {
public:
    std::string id() const override { return "ips"; }

    Decision decide(int /*t*/, int remaining) override {
        int m = inst_->ladder().size();
        if (remaining == 0) return Decision::reject(m);
        Decision d;
        d.p = inst_->ladder().skimming_d(0);
        return d;
    }
};

// Personalized fixed skimming: the fixed price is drawn internally at the
// first arrival, and every step the degenerate base is re-optimized by the
// personalization LP against the revealed distribution.
class PersonalizedFixedSkimPolicy : public Policy {
public:
    std::string id() const override { return "ps-p"; }

    void reset(std::uint64_t seed) override {
        Policy::reset(seed);
        fixed_ = -1;
    }

    Decision decide(int t, int remaining) override {
        int m = inst_->ladder().size();
        if (remaining == 0) return Decision::reject(m);
        if (fixed_ < 0) fixed_ = rng().sample(inst_->ladder().skimming_d(0));
        return personalize(Decision::degenerate(m, fixed_), inst_->arrival(t), inst_->ladder());
    }

private:
    int fixed_ = -1;
};

class PersonalizedIndependentSkimPolicy : public Policy {
public:
    std::string id() const override { return "ips-p"; }

    Decision decide(int t, int remaining) override {
        int m = inst_->ladder().size();
        if (remaining == 0) return Decision::reject(m);
        Decision base;
        base.p = inst_->ladder().skimming_d(0);
        return personalize(base, inst_->arrival(t), inst_->ladder());
    }
};

// ----- booking limits (theft nesting) ---------------------------------------

// The base price steps up when cumulative sales reach ceil(k * cum_j / q).
inline std::vector<long> booking_thresholds(const PriceLadder& ladder, int k) {
    std::vector<long> thr;
    Rational cum = 0;
    for (int j = 1; j < ladder.size(); ++j) {
        cum += ladder.weight(j);
        thr.push_back(static_cast<long>(ceil_rational(Rational(k) * cum / ladder.weight_sum())));
    }
    return thr;
}

inline int booking_base_index(const std::vector<long>& thresholds, long sales) {
    for (std::size_t j = 0; j < thresholds.size(); ++j)
        if (sales < thresholds[j]) return static_cast<int>(j) + 1;
    return static_cast<int>(thresholds.size()) + 1;  // = m
}

class BookingLimitPolicy : public Policy {
public:
    enum class Variant { plain, skim, personalized };

    explicit BookingLimitPolicy(Variant variant) : variant_(variant) {}

    std::string id() const override {
        switch (variant_) {
            case Variant::plain: return "bl";
            case Variant::skim: return "bl-ps";
            default: return "bl-p";
        }
    }

    void prepare(const ValuationInstance& inst, std::uint64_t seed) override {
        Policy::prepare(inst, seed);
        thresholds_ = booking_thresholds(inst.ladder(), inst.k());
    }

    void reset(std::uint64_t seed) override {
        Policy::reset(seed);
        sales_ = 0;
    }

    Decision decide(int t, int remaining) override {
        const PriceLadder& ladder = inst_->ladder();
        int m = ladder.size();
        if (remaining == 0) return Decision::reject(m);
        int base = booking_base_index(thresholds_, sales_);
        switch (variant_) {
            case Variant::plain:
                return Decision::degenerate(m, base);
            case Variant::skim: {
                Decision d;
                d.p = ladder.skimming_d(base - 1);
                return d;
            }
            default:
                return personalize(Decision::degenerate(m, base), inst_->arrival(t), ladder);
        }
    }

    void observe(const Observation& ob) override { sales_ += ob.purchased ? 1 : 0; }

private:
    Variant variant_;
    std::vector<long> thresholds_;
    long sales_ = 0;
};

// ----- baselines -------------------------------------------------------------

class MyopicPolicy : public Policy {
public:
    std::string id() const override { return "myopic"; }

    Decision decide(int t, int remaining) override {
        const PriceLadder& ladder = inst_->ladder();
        int m = ladder.size();
        if (remaining == 0) return Decision::reject(m);
        const Arrival& a = inst_->arrival(t);
        int best = 1;
        double best_rev = ladder.price_d(1) * a.tail_d[1];
        for (int j = 2; j <= m; ++j) {
            double rev = ladder.price_d(j) * a.tail_d[j];
            if (rev >= best_rev) {  // ties to the higher price
                best_rev = rev;
                best = j;
            }
        }
        return Decision::degenerate(m, best);
    }
};

class ConservativePolicy : public Policy {
public:
    std::string id() const override { return "conservative"; }

    Decision decide(int /*t*/, int remaining) override {
        int m = inst_->ladder().size();
        if (remaining == 0) return Decision::reject(m);
        return Decision::degenerate(m, m);
    }
};

// Clairvoyant-distribution dynamic program, as a playable policy.
class DpPolicy : public Policy {
public:
    std::string id() const override { return "dp"; }

    void prepare(const ValuationInstance& inst, std::uint64_t seed) override {
        Policy::prepare(inst, seed);
        dp_ = dp_solve(inst);
    }

    Decision decide(int t, int remaining) override {
        int m = inst_->ladder().size();
        if (remaining == 0) return Decision::reject(m);
        return Decision::degenerate(m, dp_.arg[t - 1][remaining]);
    }

    double exact_value() const { return dp_.value[0][inst_->k()]; }

private:
    DpTable dp_;
};

// Continuous-interval tracking on a ladder instance: prices range over
// [r^(1), r^(m)] and the decision is an inverse-CDF sampler descriptor.
class VtContinuousPolicy : public Policy {
public:
    std::string id() const override { return "vt-cont"; }

    void prepare(const ValuationInstance& inst, std::uint64_t seed) override {
        Policy::prepare(inst, seed);
        range_ = std::make_unique<ContinuousRange>(
            ContinuousRange::from_bounds(inst.ladder().price_d(1),
                                         inst.ladder().price_d(inst.ladder().size())));
    }

    void reset(std::uint64_t seed) override {
        Policy::reset(seed);
        val_.assign(inst_->k(), 0.0);
        sold_.assign(inst_->k(), 0);
    }

    Decision decide(int /*t*/, int remaining) override {
        int m = inst_->ladder().size();
        Decision d = Decision::reject(m);
        if (remaining == 0) return d;
        int i = tracked_unit();
        if (sold_[i]) return d;
        d.continuous = ContinuousDecision{val_[i], *range_};
        return d;
    }

    void observe(const Observation& ob) override {
        int i = tracked_unit();
        double v = inst_->ladder().price_d(ob.valuation_index) / range_->unit;
        if (v > val_[i]) {
            val_[i] = v;
            if (ob.purchased) sold_[i] = 1;
        }
    }

private:
    int tracked_unit() const {
        int best = 0;
        for (int i = 1; i < static_cast<int>(val_.size()); ++i)
            if (val_[i] < val_[best]) best = i;
        return best;
    }

    std::unique_ptr<ContinuousRange> range_;
    std::vector<double> val_;
    std::vector<char> sold_;
};

// ----- registry -----------------------------------------------------------

inline const std::vector<std::string>& all_policy_ids() {
    static const std::vector<std::string> ids = {
        "vt",   "vt-cond", "vt-max", "vt-exp", "vt-samp", "vt-cont",
        "vt-p", "ps",      "ips",    "ps-p",   "ips-p",   "bl",
        "bl-ps", "bl-p",   "myopic", "conservative", "dp"};
    return ids;
}

inline std::unique_ptr<Policy> make_policy(const std::string& id,
                                           const PolicyOptions& opts = {}) {
    if (id == "vt") return std::make_unique<VtPolicy>();
    if (id == "vt-cond") return std::make_unique<VtConditionalPolicy>(false);
    if (id == "vt-max") return std::make_unique<VtConditionalPolicy>(true);
    if (id == "vt-exp") return std::make_unique<VtExpPolicy>(opts);
    if (id == "vt-samp") return std::make_unique<VtSampPolicy>(opts);
    if (id == "vt-cont") return std::make_unique<VtContinuousPolicy>();
    if (id == "vt-p") return std::make_unique<VtPersonalizedPolicy>(opts);
    if (id == "ps") return std::make_unique<FixedSkimPolicy>();
    if (id == "ips") return std::make_unique<IndependentSkimPolicy>();
    if (id == "ps-p") return std::make_unique<PersonalizedFixedSkimPolicy>();
    if (id == "ips-p") return std::make_unique<PersonalizedIndependentSkimPolicy>();
    if (id == "bl") return std::make_unique<BookingLimitPolicy>(BookingLimitPolicy::Variant::plain);
    if (id == "bl-ps") return std::make_unique<BookingLimitPolicy>(BookingLimitPolicy::Variant::skim);
    if (id == "bl-p")
        return std::make_unique<BookingLimitPolicy>(BookingLimitPolicy::Variant::personalized);
    if (id == "myopic") return std::make_unique<MyopicPolicy>();
    if (id == "conservative") return std::make_unique<ConservativePolicy>();
    if (id == "dp") return std::make_unique<DpPolicy>();
    throw std::invalid_argument("unknown policy id: " + id);
}

}  // namespace slrm
