#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "slrm/rational.hpp"

namespace slrm {

// Price index convention throughout the library:
//   0      = the zero valuation (no purchase possible)
//   1..m   = ladder prices, strictly increasing
//   m+1    = the reject price (switch demand off)
// Valuations take indices 0..m, offered prices take 1..m+1.
using PriceIndex = int;

// Sorted discrete price set with its skimming weights:
//   q^(j) = 1 - r^(j-1)/r^(j),  q = sum_j q^(j),  ratio = 1/q.
// Immutable after construction; all derived quantities exact rationals with
// a cached double view.
class PriceLadder {
public:
    static PriceLadder from_prices(std::vector<Rational> prices) {
        if (prices.empty()) throw std::invalid_argument("price ladder: no prices given");
        for (std::size_t j = 0; j < prices.size(); ++j) {
            if (prices[j] <= 0)
                throw std::invalid_argument("price ladder: prices must be strictly positive");
            if (j > 0 && prices[j] <= prices[j - 1])
                throw std::invalid_argument(
                    "price ladder: prices must be strictly increasing (no duplicates)");
        }
        return PriceLadder(std::move(prices));
    }

    // "1,2,4" -> ladder; entries are decimal strings
    static PriceLadder parse(std::string_view csv) {
        std::vector<Rational> prices;
        std::string item;
        std::istringstream in{std::string(csv)};
        while (std::getline(in, item, ',')) {
            if (!item.empty()) prices.push_back(parse_rational(item));
        }
        return from_prices(std::move(prices));
    }

    int size() const { return m_; }

    // j in 0..m; price(0) is the zero sentinel
    const Rational& price(int j) const { return prices_[j]; }
    double price_d(int j) const { return prices_d_[j]; }

    // j in 1..m
    const Rational& weight(int j) const { return weights_[j]; }
    double weight_d(int j) const { return weights_d_[j]; }

    const Rational& weight_sum() const { return q_; }
    Rational ratio() const { return Rational(1) / q_; }
    double ratio_d() const { return to_double(ratio()); }

    PriceIndex reject_index() const { return m_ + 1; }

    // Pr[unit sold | level] = (1/q) sum_{j<=level} q^(j)   (level in 0..m)
    const Rational& sold_prob_at_level(int level) const { return sold_prob_[level]; }
    double sold_prob_at_level_d(int level) const { return sold_prob_d_[level]; }

    // Conditional skimming distribution over indices floor+1..m, returned as a
    // vector indexed by price index (size m+2; entries outside the support are 0).
    // floor = m is a contract violation: the tracking procedure never reaches it.
    std::vector<Rational> skimming(int floor) const {
        check_floor(floor);
        std::vector<Rational> p(m_ + 2, Rational(0));
        Rational tail = q_ - sold_prob_[floor] * q_;  // sum_{j>floor} q^(j)
        for (int j = floor + 1; j <= m_; ++j) p[j] = weights_[j] / tail;
        return p;
    }

    std::vector<double> skimming_d(int floor) const {
        check_floor(floor);
        double tail = 0.0;
        for (int j = floor + 1; j <= m_; ++j) tail += weights_d_[j];
        std::vector<double> p(m_ + 2, 0.0);
        for (int j = floor + 1; j <= m_; ++j) p[j] = weights_d_[j] / tail;
        return p;
    }

    // Full skimming distribution q^(j)/q over 1..m (the floor-0 case).
    std::vector<double> full_skimming_d() const { return skimming_d(0); }

    // Exact index of a valuation value in {0} u prices; throws if off-ladder.
    int index_of(const Rational& value) const {
        if (value == 0) return 0;
        for (int j = 1; j <= m_; ++j)
            if (prices_[j] == value) return j;
        throw std::invalid_argument("valuation " + format_rational(value) + " is not on the ladder");
    }

    bool operator==(const PriceLadder& other) const { return prices_ == other.prices_; }

private:
    explicit PriceLadder(std::vector<Rational> prices) {
        m_ = static_cast<int>(prices.size());
        prices_.assign(1, Rational(0));
        prices_.insert(prices_.end(), prices.begin(), prices.end());
        weights_.assign(m_ + 1, Rational(0));
        q_ = 0;
        for (int j = 1; j <= m_; ++j) {
            weights_[j] = 1 - prices_[j - 1] / prices_[j];
            q_ += weights_[j];
        }
        sold_prob_.assign(m_ + 1, Rational(0));
        Rational cum = 0;
        for (int j = 1; j <= m_; ++j) {
            cum += weights_[j];
            sold_prob_[j] = cum / q_;
        }
        for (const auto& r : prices_) prices_d_.push_back(to_double(r));
        for (const auto& r : weights_) weights_d_.push_back(to_double(r));
        for (const auto& r : sold_prob_) sold_prob_d_.push_back(to_double(r));
    }

    void check_floor(int floor) const {
        if (floor < 0 || floor >= m_)
            throw std::logic_error("skimming floor " + std::to_string(floor) +
                                   " out of range [0," + std::to_string(m_ - 1) + "]");
    }

    int m_ = 0;
    std::vector<Rational> prices_;    // [0..m], prices_[0] = 0
    std::vector<Rational> weights_;   // [1..m]
    std::vector<Rational> sold_prob_; // [0..m]
    Rational q_;
    std::vector<double> prices_d_, weights_d_, sold_prob_d_;
};

// Continuous price interval, normalized to [1, R]. `unit` carries the original
// r_min so revenues can be reported in original units.
struct ContinuousRange {
    double r_max_ratio = 1.0;  // R >= 1
    double unit = 1.0;         // original r_min

    ContinuousRange(double R, double unit_scale = 1.0) : r_max_ratio(R), unit(unit_scale) {
        if (!(R >= 1.0)) throw std::invalid_argument("continuous range: R must be >= 1");
        if (!(unit_scale > 0.0)) throw std::invalid_argument("continuous range: unit must be > 0");
    }

    static ContinuousRange from_bounds(double r_min, double r_max) {
        if (!(r_min > 0.0) || !(r_max >= r_min))
            throw std::invalid_argument("continuous range: need 0 < r_min <= r_max");
        return ContinuousRange(r_max / r_min, r_min);
    }

    double competitive_ratio() const { return 1.0 / (1.0 + std::log(r_max_ratio)); }

    // Inverse-CDF price draw (normalized units) for the continuous tracking
    // procedure. floor v in {0} u [1, R):
    //   v = 0:  price 1 with mass 1/(1+ln R), density 1/(r(1+ln R)) on (1, R]
    //   v >= 1: density 1/(r(ln R - ln v)) on (v, R]
    double sample_price(double v, double u) const {
        if (v >= r_max_ratio)
            throw std::logic_error("continuous sample: floor must be below R");
        if (v == 0.0) {
            double atom = competitive_ratio();
            if (u <= atom) return 1.0;
            return std::exp(u * (1.0 + std::log(r_max_ratio)) - 1.0);
        }
        if (v < 1.0) throw std::logic_error("continuous sample: floor must be 0 or >= 1");
        return v * std::pow(r_max_ratio / v, u);
    }
};

}  // namespace slrm
