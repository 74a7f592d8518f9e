#pragma once

#include <optional>
#include <vector>

namespace slrm {

// PMF of a sum of independent Bernoulli(means[i]) variables, by the O(n^2)
// convolution recurrence. Works for double and for exact rationals.
template <class S>
std::vector<S> poisson_binomial_pmf(const std::vector<S>& means) {
    std::vector<S> pmf(means.size() + 1, S(0));
    pmf[0] = S(1);
    int n = 0;
    for (const S& p : means) {
        for (int b = n + 1; b >= 1; --b) pmf[b] = pmf[b] * (S(1) - p) + pmf[b - 1] * p;
        pmf[0] = pmf[0] * (S(1) - p);
        ++n;
    }
    return pmf;
}

// Pr[B_i = 1 | sum_j B_j = count] for independent Bernoullis with the given
// means, via Bayes over the convolution of the others. nullopt when the count
// has probability zero.
template <class S>
std::optional<S> conditional_success_prob(const std::vector<S>& means, int i, int count) {
    std::vector<S> others;
    others.reserve(means.size() - 1);
    for (int j = 0; j < static_cast<int>(means.size()); ++j)
        if (j != i) others.push_back(means[j]);
    std::vector<S> pmf = poisson_binomial_pmf(others);
    int n = static_cast<int>(others.size());
    S with = (count >= 1 && count - 1 <= n) ? S(means[i] * pmf[count - 1]) : S(0);
    S without = (count <= n) ? S((S(1) - means[i]) * pmf[count]) : S(0);
    S total = with + without;
    if (total == S(0)) return std::nullopt;
    return with / total;
}

}  // namespace slrm
