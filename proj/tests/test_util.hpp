#pragma once

#include "slrm/instances.hpp"

namespace slrm::testutil {

// The two-customers-then-one failure fixture: ladder {1,2,4}, k = 4, two
// customers valued 4 w.p. 1/4-eps, 2 w.p. 1/4-eps, 1 w.p. 1/2+2eps, then one
// deterministic valuation 1.
inline ValuationInstance appendix_a_instance(const Rational& eps = Rational(1, 100)) {
    PriceLadder ladder = PriceLadder::parse("1,2,4");
    std::vector<Rational> pmf = {Rational(0), Rational(1, 2) + 2 * eps, Rational(1, 4) - eps,
                                 Rational(1, 4) - eps};
    std::vector<Arrival> arrivals = {Arrival::from_pmf(pmf), Arrival::from_pmf(pmf),
                                     Arrival::degenerate(3, 1)};
    return ValuationInstance(ladder, 4, std::move(arrivals), "appendix-a");
}

}  // namespace slrm::testutil
