#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "slrm/instances.hpp"
#include "test_util.hpp"

using namespace slrm;

TEST_CASE("log-linear demand pmf") {
    PriceLadder p1234 = PriceLadder::parse("1,2,3,4");
    for (double b : {0.1, 0.5, 1.3, 7.0}) {
        auto pmf = loglinear_pmf(p1234, b);
        Rational sum = 0;
        for (const auto& x : pmf) sum += x;
        CHECK(sum == Rational(1));  // telescoping is exact by construction
    }

    PriceLadder p124 = PriceLadder::parse("1,2,4");
    auto pmf = loglinear_pmf(p124, std::log(2.0));
    CHECK(to_double(pmf[0]) == Catch::Approx(0.5).margin(1e-12));
    CHECK(to_double(pmf[1]) == Catch::Approx(0.25).margin(1e-12));
    CHECK(to_double(pmf[2]) == Catch::Approx(3.0 / 16).margin(1e-12));
    CHECK(to_double(pmf[3]) == Catch::Approx(1.0 / 16).margin(1e-12));

    auto heavy = loglinear_pmf(p124, 200.0);  // b -> inf: all mass at zero valuation
    CHECK(to_double(heavy[0]) > 1.0 - 1e-12);

    CHECK_THROWS_AS(loglinear_pmf(p124, 0.0), std::invalid_argument);
}

TEST_CASE("instance validation") {
    PriceLadder ladder = PriceLadder::parse("1,2");
    std::vector<Arrival> ok = {Arrival::degenerate(2, 1)};
    CHECK_THROWS_AS(ValuationInstance(ladder, 0, ok), InstanceValidationError);
    CHECK_THROWS_AS(ValuationInstance(ladder, 1, {}), InstanceValidationError);

    std::vector<Arrival> short_sum = {
        Arrival::from_pmf({Rational(1, 2), Rational(1, 4), Rational(0)})};
    CHECK_THROWS_WITH(ValuationInstance(ladder, 1, short_sum),
                      Catch::Matchers::ContainsSubstring("arrival 1"));

    std::vector<Arrival> negative = {
        Arrival::from_pmf({Rational(3, 2), Rational(-1, 2), Rational(0)})};
    CHECK_THROWS_AS(ValuationInstance(ladder, 1, negative), InstanceValidationError);

    std::vector<Arrival> wrong_len = {Arrival::from_pmf({Rational(1)})};
    CHECK_THROWS_AS(ValuationInstance(ladder, 1, wrong_len), InstanceValidationError);
}

TEST_CASE("grid generation is seeded and reproducible") {
    ExperimentGrid grid{PriceLadder::parse("1,2,3,4"), {4}, {1, 2}, 3, 1.0 / 3, 4.0 / 3, 42};
    auto a = generate_grid(grid);
    auto b = generate_grid(grid);
    REQUIRE(a.size() == 6);  // 1 inventory x 2 multipliers x 3 instances
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id() == b[i].id());
        REQUIRE(a[i].horizon() == b[i].horizon());
        for (int t = 1; t <= a[i].horizon(); ++t)
            CHECK(a[i].arrival(t).pmf == b[i].arrival(t).pmf);
        CHECK(a[i].is_exact());
    }
    CHECK(a[0].horizon() == 4);
    CHECK(a[3].horizon() == 8);

    // cell regeneration matches the stream order
    ValuationInstance direct = grid_instance(grid, 4, 2, 1);
    CHECK(direct.arrival(1).pmf == a[4].arrival(1).pmf);

    // the paper-scale grid: 10 lengths x 1000 instances = 10000 per inventory
    ExperimentGrid big = grid;
    big.multipliers = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    big.instances_per_cell = 1000;
    std::size_t expected = big.multipliers.size() * big.instances_per_cell;
    CHECK(expected == 10000);

    ExperimentGrid one{PriceLadder::parse("1,2"), {2}, {3}, 1, 0.5, 1.0, 7};
    auto only = generate_grid(one);
    REQUIRE(only.size() == 1);
    CHECK(only[0].horizon() == 6);

    ExperimentGrid invalid = grid;
    invalid.b_lo = 2.0;
    CHECK_THROWS_AS(generate_grid(invalid), std::invalid_argument);
}

TEST_CASE("generated tails match the analytic mixture") {
    // Pr[V >= r] averaged over b ~ U[b_lo, b_hi] is
    // (exp(-b_lo r) - exp(-b_hi r)) / (r (b_hi - b_lo))
    PriceLadder ladder = PriceLadder::parse("1,2,3,4");
    double b_lo = 1.0 / 3, b_hi = 4.0 / 3;
    ExperimentGrid grid{ladder, {10}, {1}, 1, b_lo, b_hi, 2024};
    Rng rng(11);
    int n = 10000;
    std::vector<double> freq(ladder.size() + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        double b = b_lo + (b_hi - b_lo) * rng.next_double();
        auto pmf = loglinear_pmf(ladder, b);
        double cum = 0.0;
        for (int j = ladder.size(); j >= 1; --j) {
            cum += to_double(pmf[j]);
            freq[j] += cum;
        }
    }
    for (int j = 1; j <= ladder.size(); ++j) {
        double r = ladder.price_d(j);
        double analytic = (std::exp(-b_lo * r) - std::exp(-b_hi * r)) / (r * (b_hi - b_lo));
        CHECK(freq[j] / n == Catch::Approx(analytic).margin(0.01));
    }
    (void)grid;
}

TEST_CASE("instance files round trip exactly") {
    ValuationInstance inst = testutil::appendix_a_instance();
    std::string path = (std::filesystem::temp_directory_path() / "slrm_rt.json").string();
    write_instance(inst, path);
    ValuationInstance back = read_instance(path);
    CHECK(back.k() == inst.k());
    CHECK(back.ladder() == inst.ladder());
    REQUIRE(back.horizon() == inst.horizon());
    for (int t = 1; t <= inst.horizon(); ++t) {
        CHECK(back.arrival(t).pmf == inst.arrival(t).pmf);
        CHECK(back.arrival(t).deterministic == inst.arrival(t).deterministic);
    }
    std::remove(path.c_str());
}

TEST_CASE("instance file errors") {
    CHECK_THROWS_AS(read_instance("/nonexistent/inst.json"), InstanceNotFound);

    auto parse = [](const std::string& text) {
        return instance_from_json(nlohmann::json::parse(text));
    };
    // probabilities summing to 0.8: error names the offending arrival
    CHECK_THROWS_WITH(parse(R"({"prices":["1","2"],"k":1,
        "arrivals":[["0.4","0.2","0.2"]]})"),
                      Catch::Matchers::ContainsSubstring("arrival 1"));
    // deterministic entry referencing a price index off the ladder
    CHECK_THROWS_WITH(parse(R"({"prices":["1","2"],"k":1,"arrivals":[5]})"),
                      Catch::Matchers::ContainsSubstring("unknown ladder index"));
    // malformed vector length
    CHECK_THROWS_AS(parse(R"({"prices":["1","2"],"k":1,"arrivals":[["1.0"]]})"),
                    InstanceValidationError);
    CHECK_THROWS_AS(parse(R"({"k":1,"arrivals":[0]})"), InstanceParseError);

    // malformed JSON text
    std::string path = (std::filesystem::temp_directory_path() / "slrm_bad.json").string();
    {
        std::ofstream out(path);
        out << "{not json";
    }
    CHECK_THROWS_AS(read_instance(path), InstanceParseError);
    std::remove(path.c_str());
}

TEST_CASE("failure fixture parses and is exact") {
    ValuationInstance inst = testutil::appendix_a_instance();
    CHECK(inst.k() == 4);
    CHECK(inst.horizon() == 3);
    CHECK(inst.is_exact());
    CHECK_FALSE(inst.all_deterministic());
    CHECK(inst.arrival(3).deterministic);
    CHECK(inst.arrival(1).pmf[3] == Rational(1, 4) - Rational(1, 100));
    CHECK(inst.arrival(1).tail[1] == Rational(1));
}
