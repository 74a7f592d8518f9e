#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "slrm/exact.hpp"
#include "slrm/instances.hpp"
#include "slrm/rng.hpp"

namespace slrm {

struct McEstimate {
    double mean = 0.0;
    double se = 0.0;
    int reps = 0;
};

// Monte Carlo estimate of E[OPT] = expected sum of the k largest valuations.
inline McEstimate expected_opt_mc(const ValuationInstance& inst, int reps, std::uint64_t seed) {
    Rng rng(seed);
    double sum = 0.0, sumsq = 0.0;
    std::vector<int> realized(inst.horizon());
    for (int r = 0; r < reps; ++r) {
        for (int t = 1; t <= inst.horizon(); ++t) realized[t - 1] = inst.sample_valuation(t, rng);
        double v = to_double(offline_opt(inst.ladder(), inst.k(), realized));
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

// ----- full-information dynamic program -----------------------------------
//
// value[t][k'] = best expected continuation revenue facing customers t+1..T
// with k' units left, knowing all arrival distributions. Ties between prices
// go to the higher index (inventory-conservative).

template <class S>
struct DpTableT {
    std::vector<std::vector<S>> value;  // [t][k'], t = 0..T
    std::vector<std::vector<int>> arg;  // [t][k'] argmax price index for customer t+1, t = 0..T-1
};

template <class S>
DpTableT<S> dp_solve_t(const ValuationInstance& inst) {
    int k = inst.k();
    int m = inst.ladder().size();
    int T = inst.horizon();
    DpTableT<S> dp;
    dp.value.assign(T + 1, std::vector<S>(k + 1, S(0)));
    dp.arg.assign(T, std::vector<int>(k + 1, m + 1));
    std::vector<S> tail(m + 2), price(m + 1);
    for (int t = T - 1; t >= 0; --t) {
        const Arrival& a = inst.arrival(t + 1);
        for (int j = 0; j <= m + 1; ++j) {
            if constexpr (std::is_same_v<S, double>) {
                if (j <= m) price[j] = inst.ladder().price_d(j);
                tail[j] = a.tail_d[j];
            } else {
                if (j <= m) price[j] = inst.ladder().price(j);
                tail[j] = a.tail[j];
            }
        }
        for (int kp = 0; kp <= k; ++kp) {
            if (kp == 0) {
                dp.value[t][kp] = S(0);
                dp.arg[t][kp] = m + 1;
                continue;
            }
            S best = S(0);
            int best_j = m + 1;
            bool first = true;
            for (int j = 1; j <= m + 1; ++j) {
                S w = j <= m ? tail[j] : S(0);
                S cand = w * ((j <= m ? price[j] : S(0)) + dp.value[t + 1][kp - 1]) +
                         (S(1) - w) * dp.value[t + 1][kp];
                if (first || cand >= best) {  // >= : ties to the higher price
                    best = cand;
                    best_j = j;
                    first = false;
                }
            }
            dp.value[t][kp] = best;
            dp.arg[t][kp] = best_j;
        }
    }
    return dp;
}

using DpTable = DpTableT<double>;
inline DpTable dp_solve(const ValuationInstance& inst) { return dp_solve_t<double>(inst); }
inline DpTableT<Rational> dp_solve_exact(const ValuationInstance& inst) {
    return dp_solve_t<Rational>(inst);
}

// ----- deterministic linear program ----------------------------------------
//
// max  sum_j r_j sum_t x_t^j w_t^j
// s.t. sum_{t,j} x_t^j w_t^j <= k,  sum_j x_t^j <= 1,  x >= 0
//
// One coupling constraint over per-customer simplices: take each customer's
// upper concave envelope in (consumption, revenue) space and fill the k units
// of expected consumption greedily by envelope slope. Exact rationals.
inline Rational dlp_value_exact(const ValuationInstance& inst) {
    struct Segment {
        Rational slope, dc, dv;
    };
    std::vector<Segment> segments;
    int m = inst.ladder().size();
    for (int t = 1; t <= inst.horizon(); ++t) {
        const Arrival& a = inst.arrival(t);
        // candidate points (consumption, revenue), consumption ascending =
        // price descending; keep the best revenue per consumption level
        std::vector<std::pair<Rational, Rational>> pts{{Rational(0), Rational(0)}};
        for (int j = m; j >= 1; --j) {
            Rational c = a.tail[j];
            Rational v = inst.ladder().price(j) * c;
            if (c == pts.back().first) {
                if (v > pts.back().second) pts.back().second = v;
            } else if (c > pts.back().first) {
                pts.push_back({c, v});
            }
        }
        // upper concave hull by monotone-chain over the sorted points;
        // non-positive-slope segments are skipped when emitting (the LP
        // never consumes past a customer's revenue argmax)
        std::vector<std::pair<Rational, Rational>> hull;
        for (const auto& p : pts) {
            while (hull.size() >= 2) {
                const auto& [c1, v1] = hull[hull.size() - 2];
                const auto& [c2, v2] = hull[hull.size() - 1];
                // drop the middle point when it lies on or below the chord
                if ((v2 - v1) * (p.first - c1) <= (p.second - v1) * (c2 - c1))
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(p);
        }
        for (std::size_t i = 1; i < hull.size(); ++i) {
            Rational dc = hull[i].first - hull[i - 1].first;
            Rational dv = hull[i].second - hull[i - 1].second;
            if (dc <= 0 || dv <= 0) continue;
            segments.push_back({dv / dc, dc, dv});
        }
    }
    std::sort(segments.begin(), segments.end(),
              [](const Segment& a, const Segment& b) { return a.slope > b.slope; });
    Rational budget = inst.k(), total = 0;
    for (const auto& s : segments) {
        if (budget <= 0) break;
        if (s.dc <= budget) {
            total += s.dv;
            budget -= s.dc;
        } else {
            total += s.slope * budget;
            budget = 0;
        }
    }
    return total;
}

inline double dlp_value(const ValuationInstance& inst) { return to_double(dlp_value_exact(inst)); }

}  // namespace slrm
