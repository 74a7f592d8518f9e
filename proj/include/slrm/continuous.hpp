#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "slrm/oracles.hpp"
#include "slrm/price_ladder.hpp"
#include "slrm/rng.hpp"

namespace slrm {

// Deterministic demand sequence over a continuous price interval. Valuations
// in original units, each either 0 or within [unit, unit * R].
struct ContinuousInstance {
    ContinuousRange range;
    int k;
    std::vector<double> valuations;

    void validate() const {
        if (k <= 0) throw std::invalid_argument("continuous instance: k must be positive");
        for (double v : valuations) {
            double norm = v / range.unit;
            if (v != 0.0 && (norm < 1.0 - 1e-12 || norm > range.r_max_ratio + 1e-12))
                throw std::invalid_argument("continuous instance: valuation outside {0} u [r_min, r_max]");
        }
    }
};

inline double continuous_opt(const ContinuousInstance& inst) {
    std::vector<double> vals = inst.valuations;
    std::sort(vals.begin(), vals.end(), std::greater<>());
    double total = 0.0;
    for (int i = 0; i < std::min<int>(inst.k, vals.size()); ++i) total += vals[i];
    return total;
}

// One run of the continuous tracking procedure; revenue in original units.
inline double run_once_continuous(const ContinuousInstance& inst, std::uint64_t seed) {
    Rng rng(seed);
    int k = inst.k;
    std::vector<double> val(k, 0.0);
    std::vector<char> sold(k, 0);
    double revenue = 0.0;
    for (double raw : inst.valuations) {
        double v_t = raw / inst.range.unit;
        int i = 0;
        for (int u = 1; u < k; ++u)
            if (val[u] < val[i]) i = u;
        if (!sold[i]) {
            double price = inst.range.sample_price(val[i], rng.next_double());
            if (v_t >= price) {
                revenue += price * inst.range.unit;
                if (v_t > val[i]) {
                    val[i] = v_t;
                    sold[i] = 1;
                }
            } else if (v_t > val[i]) {
                val[i] = v_t;
            }
        } else if (v_t > val[i]) {
            val[i] = v_t;
        }
    }
    return revenue;
}

inline McEstimate simulate_continuous(const ContinuousInstance& inst, int reps,
                                      std::uint64_t seed) {
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < reps; ++r) {
        double v = run_once_continuous(inst, hash_mix({seed, static_cast<std::uint64_t>(r)}));
        sum += v;
        sumsq += v * v;
    }
    McEstimate est;
    est.reps = reps;
    est.mean = sum / reps;
    double var = std::max(0.0, (sumsq - sum * sum / reps) / std::max(1, reps - 1));
    est.se = std::sqrt(var / reps);
    return est;
}

// Per-unit sold probabilities after the run, for the depletion-law checks.
inline std::vector<double> continuous_sold_frequency(const ContinuousInstance& inst, int reps,
                                                     std::uint64_t seed) {
    int k = inst.k;
    std::vector<double> freq(k, 0.0);
    for (int r = 0; r < reps; ++r) {
        Rng rng(hash_mix({seed, 0x5eedULL, static_cast<std::uint64_t>(r)}));
        std::vector<double> val(k, 0.0);
        std::vector<char> sold(k, 0);
        for (double raw : inst.valuations) {
            double v_t = raw / inst.range.unit;
            int i = 0;
            for (int u = 1; u < k; ++u)
                if (val[u] < val[i]) i = u;
            if (!sold[i]) {
                double price = inst.range.sample_price(val[i], rng.next_double());
                if (v_t >= price && v_t > val[i]) sold[i] = 1;
            }
            if (v_t > val[i]) val[i] = v_t;
        }
        for (int i = 0; i < k; ++i) freq[i] += sold[i];
    }
    for (auto& f : freq) f /= reps;
    return freq;
}

}  // namespace slrm
