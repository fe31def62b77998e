#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pqmt/memdevice.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace pqmt;

TEST_CASE("mem params window and validation") {
    MemParams params;
    params.tau_int = 0.3;
    params.dt = 0.01;
    CHECK(params.window() == 30);
    params.tau_int = 0.004;
    CHECK(params.window() == 1);

    MemParams bad = params;
    bad.dt = 0.0;
    CHECK_THROWS(bad.validate());
    bad = params;
    bad.p = 1.5;
    CHECK_THROWS(bad.validate());
    bad = params;
    bad.d = -1.0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("pqmr transmittance constants") {
    std::vector<double> half(10, 0.5), zero(10, 0.0), full(10, 1.0);
    CHECK(pqmr_transmittance(half, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(pqmr_transmittance(zero, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pqmr_transmittance(full, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS((void)pqmr_transmittance(std::vector<double>{}, 1.0));
}

TEST_CASE("history map constants") {
    using Pair = std::pair<double, double>;
    std::vector<Pair> gate_off(8, {0.7, 1.0});
    CHECK(history_map(gate_off, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    std::vector<Pair> max_drive(8, {1.0, 0.0});
    CHECK(history_map(max_drive, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    std::vector<Pair> quarter(8, {0.25, 0.0});
    CHECK(history_map(quarter, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS((void)history_map(std::vector<Pair>{}, 1.0));
}

TEST_CASE("gate function identities over the parameter grid") {
    const std::vector<double> ps = {0.1, 0.3, 0.5, 0.7, 0.9};
    const std::vector<double> ds = {0.0, 1.0, 5.0, 10.0, 20.0};
    for (double p : ps) {
        for (double d : ds) {
            CHECK(std::abs(gate_function(1.0, p, d) - 1.0) <= 1e-10);

            const double h = 1e-7;
            CHECK(std::abs(gate_function(p - 1e-12, p, d) -
                           gate_function(p + 1e-12, p, d)) <= 1e-10);
            double left = (gate_function(p - h, p, d) - gate_function(p - 3 * h, p, d)) /
                          (2 * h);
            double right = (gate_function(p + 3 * h, p, d) - gate_function(p + h, p, d)) /
                           (2 * h);
            CHECK(std::abs(left - right) <= 1e-6 * std::max(1.0, std::abs(left)));

            double previous = gate_function(0.0, p, d);
            for (int k = 1; k <= 1000; ++k) {
                double value = gate_function(k * 1e-3, p, d);
                CHECK(value >= previous - 1e-12);
                previous = value;
            }
        }
    }
}

TEST_CASE("gate function reference values") {
    for (double x : {0.0, 0.3, 0.7, 1.0})
        CHECK(gate_function(x, 0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-14));

    // Closed form at p=0.5, d=10: a1 = 1/(2e^5 - 1).
    const double a1 = 1.0 / (2.0 * std::exp(5.0) - 1.0);
    CHECK(gate_function(0.0, 0.5, 10.0) == doctest::Approx(a1).epsilon(1e-12));
    CHECK(gate_function(0.0, 0.5, 10.0) == doctest::Approx(3.3804e-3).epsilon(1e-4));
    CHECK(gate_function(0.5, 0.5, 10.0) ==
          doctest::Approx(a1 * std::exp(5.0)).epsilon(1e-12));
    CHECK(gate_function(0.5, 0.5, 10.0) == doctest::Approx(0.50170).epsilon(1e-4));
}

TEST_CASE("pqmt transmittance reduction laws") {
    MemParams params;
    params.tau_int = 5.0;
    params.dt = 1.0;
    params.n_max = 1.0;
    params.p = 0.5;

    SUBCASE("d=0 equals the ungated law") {
        params.d = 0.0;
        HistoryBuffer buffer(params.window(), 0.3, 0.2);
        std::vector<double> na(params.window(), 0.3);
        CHECK(pqmt_transmittance(buffer, params) ==
              doctest::Approx(pqmr_transmittance(na, 1.0)).epsilon(1e-14));
    }

    SUBCASE("gate-off equals the ungated law") {
        params.d = 10.0;
        HistoryBuffer buffer(params.window(), 0.3, 1.0);
        std::vector<double> na(params.window(), 0.3);
        CHECK(pqmt_transmittance(buffer, params) ==
              doctest::Approx(pqmr_transmittance(na, 1.0)).epsilon(1e-14));
    }

    SUBCASE("gate-on with d>0 strictly reduces T") {
        params.d = 10.0;
        HistoryBuffer buffer(params.window(), 0.3, 0.0);
        std::vector<double> na(params.window(), 0.3);
        CHECK(pqmt_transmittance(buffer, params) < pqmr_transmittance(na, 1.0));
    }
}

TEST_CASE("unit stepping") {
    MemParams params;
    params.tau_int = 4.0;
    params.dt = 1.0;
    params.n_max = 1.0;
    params.p = 0.5;
    params.d = 10.0;
    PqmtUnit unit(params);

    CHECK(unit.transmittance() == doctest::Approx(0.5).epsilon(1e-12));
    unit.step(0.5, 1.0);
    CHECK(unit.transmittance() == doctest::Approx(0.5).epsilon(1e-12));

    for (int k = 0; k < params.window(); ++k) unit.step(0.0, 1.0);
    CHECK(unit.transmittance() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(unit.theta() == doctest::Approx(0.0).epsilon(1e-6));

    for (int k = 0; k < params.window(); ++k) unit.step(1.0, 0.0);
    CHECK(unit.transmittance() == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS(unit.step(std::numeric_limits<double>::quiet_NaN(), 0.0));

    // T = cos^2(theta/2) is maintained after every step.
    unit.reset();
    for (double na : {0.1, 0.9, 0.4, 0.7}) {
        unit.step(na, 0.3);
        double c = std::cos(unit.theta() / 2);
        CHECK(unit.transmittance() == doctest::Approx(c * c).epsilon(1e-12));
    }
}

TEST_CASE("memoryless limit and fixed point") {
    MemParams params;
    params.tau_int = 1.0;
    params.dt = 1.0;  // w = 1
    params.n_max = 1.0;
    params.p = 0.5;
    params.d = 10.0;

    PqmtUnit a(params), b(params);
    for (double na : {0.9, 0.1, 0.5}) a.step(na, 0.2);
    b.step(0.2, 0.8);
    a.step(0.42, 0.13);
    b.step(0.42, 0.13);
    CHECK(a.transmittance() == doctest::Approx(b.transmittance()).epsilon(1e-14));

    params.tau_int = 7.0;
    PqmtUnit c(params);
    for (int k = 0; k < params.window(); ++k) c.step(0.3, 0.6);
    double settled = c.transmittance();
    for (int k = 0; k < 20; ++k) {
        c.step(0.3, 0.6);
        CHECK(c.transmittance() == doctest::Approx(settled).epsilon(1e-14));
    }
}

TEST_CASE("inflection point") {
    CHECK(inflection_point(2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(inflection_point(4) == doctest::Approx(1.0 - std::sqrt(0.1875)).epsilon(1e-12));
    CHECK(inflection_point(4) == doctest::Approx(0.56699).epsilon(1e-4));
    CHECK(inflection_point(9) == doctest::Approx(1.0 - std::sqrt(8.0 / 81.0)).epsilon(1e-12));
    CHECK(inflection_point(9) == doctest::Approx(0.68573).epsilon(1e-4));
    CHECK_THROWS((void)inflection_point(0));
}

TEST_CASE("input inference from the reflected port") {
    CHECK(infer_input_photons(0.0, 0.3) == doctest::Approx(0.0));
    CHECK(infer_input_photons(0.25, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS((void)infer_input_photons(0.1, 1.0));
}
