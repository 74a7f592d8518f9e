#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slrm/instances.hpp"
#include "slrm/rational.hpp"
#include "slrm/rng.hpp"

namespace slrm {

// Sampler descriptor for the continuous-interval tracking procedure: an
// inverse-CDF draw above the tracked unit's value.
struct ContinuousDecision {
    double floor;  // normalized, in {0} u [1, R)
    ContinuousRange range;
};

// A randomized price choice for one arrival: probabilities over price indices
// 1..m+1 (index m+1 = reject), stored in a vector of size m+2 with p[0] == 0.
// Continuous-price policies set the sampler descriptor instead.
struct Decision {
    std::vector<double> p;
    std::optional<ContinuousDecision> continuous;

    static Decision reject(int m) {
        Decision d;
        d.p.assign(m + 2, 0.0);
        d.p[m + 1] = 1.0;
        return d;
    }
    static Decision degenerate(int m, int j) {
        Decision d;
        d.p.assign(m + 2, 0.0);
        d.p[j] = 1.0;
        return d;
    }

    double reject_mass() const { return p.back(); }
};

struct RatDecision {
    std::vector<Rational> p;  // same layout, exact

    static RatDecision reject(int m) {
        RatDecision d;
        d.p.assign(m + 2, Rational(0));
        d.p[m + 1] = 1;
        return d;
    }
    static RatDecision degenerate(int m, int j) {
        RatDecision d;
        d.p.assign(m + 2, Rational(0));
        d.p[j] = 1;
        return d;
    }

    Decision to_double() const {
        Decision d;
        d.p.reserve(p.size());
        for (const auto& r : p) d.p.push_back(slrm::to_double(r));
        return d;
    }
};

struct Observation {
    int t;                // 1-based arrival
    PriceIndex offered;   // 1..m+1; m+1 also stands in for continuous offers
    bool purchased;
    int valuation_index;  // realized valuation, 0..m
    double price_value = 0.0;  // offered price in value units (continuous included)
};

struct PolicyOptions {
    double epsilon = 0.05;          // Samp competitiveness slack
    int vt_samples = 1000;          // per-step sample budget of the tracking estimate
    std::uint64_t exp_cap = 1'000'000;  // enumeration cap for the exact conditional policy
};

// Runtime policy contract. One policy object serves one simulation worker:
// prepare() runs once per instance (heavy precomputation), reset() once per
// replication. decide() must put all mass on the reject index when remaining
// inventory is zero. Randomized policies draw from rng() only, in decision
// order, so a (policy, replication) pair is a single seeded stream.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string id() const = 0;

    virtual void prepare(const ValuationInstance& inst, std::uint64_t /*seed*/) { inst_ = &inst; }
    virtual void reset(std::uint64_t seed) { rng_ = std::make_unique<Rng>(seed); }
    virtual Decision decide(int t, int remaining) = 0;
    virtual void observe(const Observation&) {}

    Rng& rng() { return *rng_; }

protected:
    const ValuationInstance* inst_ = nullptr;
    std::unique_ptr<Rng> rng_;
};

// Exact-enumeration contract: a policy exposes its per-step decision
// distribution as exact rationals, as a function of a hashable state that it
// evolves itself. The enumeration oracle merges identical (state, remaining)
// pairs, so the state must be a sufficient statistic for future behavior.
class ExactPolicy {
public:
    using State = std::vector<int>;

    virtual ~ExactPolicy() = default;
    virtual State initial(const ValuationInstance& inst) = 0;
    virtual RatDecision decide(const ValuationInstance& inst, const State& s, int t,
                               int remaining) = 0;
    virtual State advance(const ValuationInstance& inst, const State& s, int t,
                          PriceIndex offered, bool purchased, int valuation) = 0;
};

}  // namespace slrm
