#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "slrm/price_ladder.hpp"
#include "slrm/rational.hpp"
#include "slrm/rng.hpp"

namespace slrm {

struct InstanceNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InstanceParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InstanceValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One customer: a pmf over valuation indices 0..m. Deterministic valuations
// are stored as degenerate vectors.
struct Arrival {
    std::vector<Rational> pmf;   // size m+1
    std::vector<Rational> tail;  // tail[j] = Pr[V >= r^(j)], size m+2, tail[m+1] = 0
    std::vector<double> pmf_d;
    std::vector<double> tail_d;
    bool deterministic = false;
    int det_index = -1;

    static Arrival from_pmf(std::vector<Rational> pmf) {
        Arrival a;
        a.pmf = std::move(pmf);
        a.finish();
        return a;
    }

    static Arrival degenerate(int m, int index) {
        Arrival a;
        a.pmf.assign(m + 1, Rational(0));
        a.pmf[index] = 1;
        a.finish();
        return a;
    }

    void finish() {
        int m = static_cast<int>(pmf.size()) - 1;
        tail.assign(m + 2, Rational(0));
        for (int j = m; j >= 0; --j) tail[j] = tail[j + 1] + pmf[j];
        det_index = -1;
        for (int j = 0; j <= m; ++j) {
            if (pmf[j] == 1) det_index = j;
        }
        deterministic = det_index >= 0;
        pmf_d.clear();
        tail_d.clear();
        for (const auto& r : pmf) pmf_d.push_back(to_double(r));
        for (const auto& r : tail) tail_d.push_back(to_double(r));
    }
};

// A demand instance: ladder, starting inventory, and T arrivals.
class ValuationInstance {
public:
    ValuationInstance(PriceLadder ladder, int k, std::vector<Arrival> arrivals,
                      std::string id = "")
        : ladder_(std::move(ladder)), k_(k), arrivals_(std::move(arrivals)), id_(std::move(id)) {
        if (k_ <= 0) throw InstanceValidationError("instance: inventory k must be positive");
        if (arrivals_.empty()) throw InstanceValidationError("instance: needs at least one arrival");
        for (std::size_t t = 0; t < arrivals_.size(); ++t) validate_arrival(t);
    }

    static ValuationInstance deterministic(PriceLadder ladder, int k, std::vector<int> indices,
                                           std::string id = "") {
        std::vector<Arrival> arrivals;
        arrivals.reserve(indices.size());
        int m = ladder.size();
        for (std::size_t t = 0; t < indices.size(); ++t) {
            if (indices[t] < 0 || indices[t] > m)
                throw InstanceValidationError("instance: arrival " + std::to_string(t + 1) +
                                              " references unknown ladder index " +
                                              std::to_string(indices[t]));
            arrivals.push_back(Arrival::degenerate(m, indices[t]));
        }
        return ValuationInstance(std::move(ladder), k, std::move(arrivals), std::move(id));
    }

    const PriceLadder& ladder() const { return ladder_; }
    int k() const { return k_; }
    int horizon() const { return static_cast<int>(arrivals_.size()); }
    const std::string& id() const { return id_; }
    void set_id(std::string id) { id_ = std::move(id); }

    // t is 1-based throughout the library
    const Arrival& arrival(int t) const { return arrivals_[t - 1]; }

    bool all_deterministic() const {
        for (const auto& a : arrivals_)
            if (!a.deterministic) return false;
        return true;
    }

    // Exact instances are required by the enumeration oracles.
    bool is_exact() const {
        for (const auto& a : arrivals_) {
            Rational sum = 0;
            for (const auto& p : a.pmf) sum += p;
            if (sum != 1) return false;
        }
        return true;
    }

    int sample_valuation(int t, Rng& rng) const {
        const Arrival& a = arrival(t);
        if (a.deterministic) return a.det_index;
        return rng.sample(a.pmf_d);
    }

private:
    void validate_arrival(std::size_t t) const {
        const Arrival& a = arrivals_[t];
        if (static_cast<int>(a.pmf.size()) != ladder_.size() + 1)
            throw InstanceValidationError("instance: arrival " + std::to_string(t + 1) +
                                          " has wrong vector length");
        Rational sum = 0;
        for (const auto& p : a.pmf) {
            if (p < 0)
                throw InstanceValidationError("instance: arrival " + std::to_string(t + 1) +
                                              " has a negative probability");
            sum += p;
        }
        if (boost::multiprecision::abs(Rational(sum - 1)).convert_to<double>() > 1e-12)
            throw InstanceValidationError("instance: arrival " + std::to_string(t + 1) +
                                          " probabilities sum to " + format_rational(sum) +
                                          ", not 1");
    }

    PriceLadder ladder_;
    int k_;
    std::vector<Arrival> arrivals_;
    std::string id_;
};

// Log-linear (exponential) demand: Pr[V >= P] = exp(-b P). The survival points
// are evaluated in doubles and differenced exactly, so the pmf telescopes to 1.
inline std::vector<Rational> loglinear_pmf(const PriceLadder& ladder, double b) {
    if (!(b > 0)) throw std::invalid_argument("loglinear: price sensitivity b must be positive");
    int m = ladder.size();
    std::vector<Rational> survival(m + 2);
    survival[0] = 1;
    for (int j = 1; j <= m; ++j)
        survival[j] = rational_from_double(std::exp(-b * ladder.price_d(j)));
    survival[m + 1] = 0;
    std::vector<Rational> pmf(m + 1);
    for (int j = 0; j <= m; ++j) pmf[j] = survival[j] - survival[j + 1];
    return pmf;
}

// ----- instance files ---------------------------------------------------
//
// JSON schema:
//   { "prices": ["1","2","4"], "k": 4, "id": "optional",
//     "arrivals": [ 3, ["0.5","0.25","0.1875","0.0625"], ... ] }
// Probabilities and prices are decimal strings (or "p/q"), which keeps the
// round trip exact.

inline ValuationInstance instance_from_json(const nlohmann::json& doc) {
    try {
        if (!doc.contains("prices") || !doc.contains("k") || !doc.contains("arrivals"))
            throw InstanceParseError("instance file: missing prices/k/arrivals");
        std::vector<Rational> prices;
        for (const auto& p : doc.at("prices")) prices.push_back(parse_rational(p.get<std::string>()));
        PriceLadder ladder = PriceLadder::from_prices(std::move(prices));
        int m = ladder.size();
        int k = doc.at("k").get<int>();
        std::vector<Arrival> arrivals;
        int t = 0;
        for (const auto& entry : doc.at("arrivals")) {
            ++t;
            if (entry.is_number_integer()) {
                int idx = entry.get<int>();
                if (idx < 0 || idx > m)
                    throw InstanceValidationError("instance: arrival " + std::to_string(t) +
                                                  " references unknown ladder index " +
                                                  std::to_string(idx));
                arrivals.push_back(Arrival::degenerate(m, idx));
            } else if (entry.is_array()) {
                std::vector<Rational> pmf;
                for (const auto& p : entry) pmf.push_back(parse_rational(p.get<std::string>()));
                if (static_cast<int>(pmf.size()) != m + 1)
                    throw InstanceValidationError("instance: arrival " + std::to_string(t) +
                                                  " has " + std::to_string(pmf.size()) +
                                                  " entries, expected " + std::to_string(m + 1));
                Rational sum = 0;
                for (const auto& p : pmf) sum += p;
                if (boost::multiprecision::abs(Rational(sum - 1)).convert_to<double>() > 1e-9)
                    throw InstanceValidationError("instance: arrival " + std::to_string(t) +
                                                  " probabilities sum to " + format_rational(sum));
                arrivals.push_back(Arrival::from_pmf(std::move(pmf)));
            } else {
                throw InstanceParseError("instance file: arrival " + std::to_string(t) +
                                         " must be an index or a probability vector");
            }
        }
        std::string id = doc.value("id", std::string());
        return ValuationInstance(std::move(ladder), k, std::move(arrivals), std::move(id));
    } catch (const nlohmann::json::exception& e) {
        throw InstanceParseError(std::string("instance file: ") + e.what());
    }
}

inline ValuationInstance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InstanceNotFound("instance not found: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InstanceParseError(std::string("instance file: ") + e.what());
    }
    return instance_from_json(doc);
}

inline nlohmann::json instance_to_json(const ValuationInstance& inst) {
    nlohmann::json doc;
    doc["prices"] = nlohmann::json::array();
    for (int j = 1; j <= inst.ladder().size(); ++j)
        doc["prices"].push_back(format_rational(inst.ladder().price(j)));
    doc["k"] = inst.k();
    if (!inst.id().empty()) doc["id"] = inst.id();
    doc["arrivals"] = nlohmann::json::array();
    for (int t = 1; t <= inst.horizon(); ++t) {
        const Arrival& a = inst.arrival(t);
        if (a.deterministic) {
            doc["arrivals"].push_back(a.det_index);
        } else {
            nlohmann::json vec = nlohmann::json::array();
            for (const auto& p : a.pmf) vec.push_back(format_rational(p));
            doc["arrivals"].push_back(std::move(vec));
        }
    }
    return doc;
}

inline void write_instance(const ValuationInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << instance_to_json(inst).dump(1) << "\n";
}

// ----- experiment grid --------------------------------------------------

// The randomized experiment family: log-linear customers with b_t iid uniform
// on [b_lo, b_hi], horizons T = multiplier * k.
struct ExperimentGrid {
    PriceLadder ladder;
    std::vector<int> inventories;   // e.g. {10, 100}
    std::vector<int> multipliers;   // e.g. {1, ..., 10}
    int instances_per_cell = 1000;
    double b_lo = 1.0 / 3.0;
    double b_hi = 4.0 / 3.0;
    std::uint64_t master_seed = 1;

    void validate() const {
        if (inventories.empty() || multipliers.empty() || instances_per_cell <= 0)
            throw std::invalid_argument("experiment grid: all counts must be positive");
        for (int k : inventories)
            if (k <= 0) throw std::invalid_argument("experiment grid: inventories must be positive");
        for (int mult : multipliers)
            if (mult <= 0) throw std::invalid_argument("experiment grid: multipliers must be positive");
        if (!(b_lo > 0) || !(b_lo < b_hi))
            throw std::invalid_argument("experiment grid: need 0 < b_lo < b_hi");
    }
};

// Instance streams are seeded by (master, k, T, index), so any cell can be
// regenerated independently and in parallel.
inline ValuationInstance grid_instance(const ExperimentGrid& grid, int k, int multiplier,
                                       int index) {
    int T = multiplier * k;
    Rng rng(hash_mix({grid.master_seed, static_cast<std::uint64_t>(k),
                      static_cast<std::uint64_t>(T), static_cast<std::uint64_t>(index)}));
    std::vector<Arrival> arrivals;
    arrivals.reserve(T);
    for (int t = 0; t < T; ++t) {
        double b = grid.b_lo + (grid.b_hi - grid.b_lo) * rng.next_double();
        arrivals.push_back(Arrival::from_pmf(loglinear_pmf(grid.ladder, b)));
    }
    std::string id = "k" + std::to_string(k) + "_T" + std::to_string(T) + "_i" +
                     std::to_string(index);
    return ValuationInstance(grid.ladder, k, std::move(arrivals), std::move(id));
}

inline std::vector<ValuationInstance> generate_grid(const ExperimentGrid& grid) {
    grid.validate();
    std::vector<ValuationInstance> out;
    out.reserve(grid.inventories.size() * grid.multipliers.size() * grid.instances_per_cell);
    for (int k : grid.inventories)
        for (int mult : grid.multipliers)
            for (int i = 0; i < grid.instances_per_cell; ++i)
                out.push_back(grid_instance(grid, k, mult, i));
    return out;
}

}  // namespace slrm
