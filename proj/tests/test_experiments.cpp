#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pqmt/experiments.hpp"

#include <cmath>

using namespace pqmt;

namespace {

HysteresisSettings quick_settings() {
    HysteresisSettings settings;
    settings.steps_per_cycle = 40;
    settings.transient_cycles = 3;
    settings.max_cycles = 16;
    return settings;
}

}  // namespace

TEST_CASE("device drive state") {
    auto basis = FockBasis::make(2, 2);
    const double ne = 0.5;

    PureState start = device_drive_state(0.0, 1.0, ne, basis);
    CHECK(std::norm(start.amplitudes(basis->index_of({0, 0}))) ==
          doctest::Approx(1 - ne).epsilon(1e-12));
    CHECK(std::norm(start.amplitudes(basis->index_of({0, 1}))) ==
          doctest::Approx(ne).epsilon(1e-12));
    CHECK(mean_photon_number(start, 0) == doctest::Approx(0.0).epsilon(1e-12));

    PureState half = device_drive_state(0.5, 1.0, ne, basis);
    CHECK(std::norm(half.amplitudes(basis->index_of({1, 0}))) ==
          doctest::Approx(1 - ne).epsilon(1e-12));
    CHECK(mean_photon_number(half, 0) == doctest::Approx(1.0).epsilon(1e-12));

    for (double t : {0.1, 0.23, 0.77}) {
        PureState psi = device_drive_state(t, 1.0, ne, basis);
        CHECK(mean_photon_number(psi, 0) ==
              doctest::Approx(std::pow(std::sin(M_PI * t), 2)).epsilon(1e-12));
    }
    CHECK_THROWS((void)device_drive_state(0.0, 1.0, 1.5, basis));
}

TEST_CASE("gate-off device run equals the d=0 run") {
    HysteresisSettings gated = quick_settings();
    gated.tau_ratio = 0.3;
    gated.n_max = 1.0;
    gated.p = 0.5;
    gated.d = 10.0;
    HysteresisSettings ungated = gated;
    ungated.d = 0.0;

    auto a = run_device_periodic(gated, 1.0);    // nE = n_max: gate inert
    auto b = run_device_periodic(ungated, 1.0);
    REQUIRE(a.size() == b.size());
    // The measured gate occupation is 1 only up to rounding, and the history
    // map takes a square root of (1 - nE), amplifying that to ~1e-8.
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(std::abs(a[k].transmittance - b[k].transmittance) < 5e-8);
        CHECK(std::abs(a[k].n_out - b[k].n_out) < 5e-8);
        CHECK(std::abs(a[k].gamma_out - b[k].gamma_out) < 5e-8);
    }
}

TEST_CASE("memoryless device drive collapses the photon loop") {
    HysteresisSettings settings = quick_settings();
    settings.steps_per_cycle = 100;
    settings.tau_ratio = 1.0 / settings.steps_per_cycle;  // w = 1
    settings.n_max = 1.0;
    settings.p = 0.5;
    settings.d = 10.0;
    auto results = run_device_hysteresis(settings, std::vector<double>{0.0});
    REQUIRE(results.size() == 1);
    CHECK(results[0].area_photon <= 1e-4);
}

TEST_CASE("network hysteresis pair symmetries") {
    HysteresisSettings settings = quick_settings();
    settings.tau_ratio = 0.7;
    settings.n_max = 2.0;
    settings.d = 10.0;

    Occupation i = {0, 0, 0}, j = {0, 1, 1};
    double base = run_network_hysteresis(3, settings, i, j).area;

    SUBCASE("swapped pair gives the same area") {
        double swapped = run_network_hysteresis(3, settings, j, i).area;
        CHECK(swapped == doctest::Approx(base).epsilon(1e-8));
    }
    SUBCASE("cyclically shifted pair gives the same area") {
        double shifted =
            run_network_hysteresis(3, settings, {0, 0, 0}, {1, 0, 1}).area;
        CHECK(shifted == doctest::Approx(base).epsilon(1e-8));
    }
    SUBCASE("identical pair rejected") {
        CHECK_THROWS((void)run_network_hysteresis(3, settings, i, i));
    }
}

TEST_CASE("ensemble state family and pair counts") {
    CHECK(ensemble_states(4).size() == 15);
    CHECK(ensemble_states(2).size() == 6);

    HysteresisSettings settings = quick_settings();
    settings.steps_per_cycle = 20;
    settings.transient_cycles = 2;
    settings.max_cycles = 8;
    settings.tau_ratio = 0.7;
    settings.n_max = 2.0;
    settings.d = 5.0;
    auto results = run_ensemble(2, settings, std::vector<double>{0.7}, true, 2);
    REQUIRE(results.size() == 1);
    CHECK(results[0].realizations.size() == 15);  // C(6,2)

    double sum = 0.0;
    for (const auto& r : results[0].realizations) sum += r.area;
    CHECK(results[0].mean_area == doctest::Approx(sum / 15).epsilon(1e-12));

    auto no_vacuum = run_ensemble(2, settings, std::vector<double>{0.7}, false, 1);
    CHECK(no_vacuum[0].realizations.size() == 10);  // C(5,2)
}

TEST_CASE("ensemble is deterministic and job-count independent") {
    HysteresisSettings settings = quick_settings();
    settings.steps_per_cycle = 20;
    settings.transient_cycles = 2;
    settings.max_cycles = 8;
    settings.n_max = 2.0;
    settings.d = 10.0;
    auto serial = run_ensemble(2, settings, std::vector<double>{0.6, 0.9}, true, 1);
    auto parallel = run_ensemble(2, settings, std::vector<double>{0.6, 0.9}, true, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t r = 0; r < serial.size(); ++r) {
        CHECK(serial[r].mean_area == parallel[r].mean_area);
        for (std::size_t k = 0; k < serial[r].realizations.size(); ++k) {
            CHECK(serial[r].realizations[k].state_i == parallel[r].realizations[k].state_i);
            CHECK(serial[r].realizations[k].area == parallel[r].realizations[k].area);
        }
    }
}

TEST_CASE("marginal hysteresis") {
    HysteresisSettings settings = quick_settings();
    settings.steps_per_cycle = 20;
    settings.transient_cycles = 2;
    settings.max_cycles = 8;
    settings.tau_ratio = 0.7;
    settings.n_max = 2.0;
    settings.d = 10.0;

    CHECK_THROWS((void)marginal_hysteresis({0, 0}, settings, 2));

    double m01 = marginal_hysteresis({0, 1}, settings, 2);
    double m10 = marginal_hysteresis({1, 0}, settings, 2);
    CHECK(m01 == doctest::Approx(m10).epsilon(1e-8));
    CHECK(m01 >= 0.0);
}
