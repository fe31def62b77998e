#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pqmt/experiments.hpp"
#include "pqmt/metrics.hpp"
#include "pqmt/network.hpp"
#include "pqmt/optics.hpp"

#include <cmath>
#include <random>

using namespace pqmt;

namespace {

MemParams make_params(double tau_int, double dt, double n_max, double p, double d) {
    MemParams params;
    params.tau_int = tau_int;
    params.dt = dt;
    params.n_max = n_max;
    params.p = p;
    params.d = d;
    return params;
}

PureState pair_drive(const BasisPtr& basis, const Occupation& i, const Occupation& j,
                     double phase) {
    PureState psi = PureState::vacuum(basis);
    psi.amplitudes.setZero();
    psi.amplitudes(basis->index_of(i)) = std::cos(phase);
    psi.amplitudes(basis->index_of(j)) = std::sin(phase);
    return psi;
}

}  // namespace

TEST_CASE("device step basics") {
    MemParams params = make_params(4.0, 1.0, 1.0, 0.5, 10.0);
    auto basis2 = FockBasis::make(2, 2);

    SUBCASE("output coherence follows the coupler law at the step's theta") {
        PqmtUnit unit(params);
        const double alpha = 0.6, beta = 0.8;
        PureState a = PureState::vacuum(FockBasis::make(1, 2));
        a.amplitudes(a.basis->index_of({0})) = alpha;
        a.amplitudes(a.basis->index_of({1})) = beta;
        PureState joint = tensor_product(a, PureState::vacuum(FockBasis::make(1, 2)), 2);
        auto [rho_c, record] = device_step(unit, pure_to_mixed(joint));
        double c = std::cos(unit.theta() / 2);
        CHECK(record.gamma_in == doctest::Approx(2 * alpha * beta).epsilon(1e-10));
        CHECK(record.gamma_out == doctest::Approx(2 * alpha * beta * c).epsilon(1e-10));
        CHECK(trace_real(rho_c) == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("wrong mode count rejected") {
        PqmtUnit unit(params);
        MixedState rho3 = MixedState::vacuum(FockBasis::make(3, 2));
        CHECK_THROWS((void)device_step(unit, rho3));
    }
}

TEST_CASE("network with all units at T=1 is transparent") {
    // Transmit-then-update ordering so the saturated pre-step T=1 governs the
    // probe step's transmission.
    MemParams params = make_params(8.0, 1.0, 2.0, inflection_point(3), 10.0);
    PqmtNetwork net(3, params, UpdateOrder::transmit_then_update);
    auto basis = FockBasis::make(3, 2);
    PureState vac = PureState::vacuum(basis);
    for (int k = 0; k < params.window() + 1; ++k) net.step(vac);
    for (double t : net.transmittances()) CHECK(t == doctest::Approx(1.0).epsilon(1e-12));

    PureState psi = pair_drive(basis, {0, 0, 0}, {0, 1, 1}, 0.4);
    auto [rho, record] = net.step(psi);
    CHECK((rho.matrix - pure_to_mixed(psi).matrix).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(record.gamma_in == doctest::Approx(l1_coherence(psi)).epsilon(1e-10));
    CHECK(record.gamma_out == doctest::Approx(record.gamma_in).epsilon(1e-10));
    CHECK(trace_real(rho) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("vacuum drive saturates all transmittances") {
    MemParams params = make_params(5.0, 1.0, 2.0, 0.5, 10.0);
    PqmtNetwork net(4, params);
    auto basis = FockBasis::make(4, 2);
    for (int k = 0; k < params.window(); ++k) {
        auto [rho, record] = net.step(PureState::vacuum(basis));
        for (double na : record.n_in) CHECK(na == doctest::Approx(0.0));
        CHECK(trace_real(rho) == doctest::Approx(1.0).epsilon(1e-10));
    }
    for (double t : net.transmittances()) CHECK(t == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("d=0 network decouples into isolated units") {
    const int size = 4;
    MemParams params = make_params(6.0, 1.0, 2.0, inflection_point(size), 0.0);
    PqmtNetwork net(size, params);
    auto basis = FockBasis::make(size, 2);

    std::vector<PqmtUnit> isolated(size, PqmtUnit(params));
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> angle(0.0, M_PI);
    for (int step = 0; step < 25; ++step) {
        PureState psi = pair_drive(basis, {0, 0, 0, 0}, {0, 0, 1, 1}, angle(rng));
        std::vector<double> n_in(size);
        for (int q = 0; q < size; ++q) n_in[q] = mean_photon_number(psi, q);
        auto [rho, record] = net.step(psi);
        for (int q = 0; q < size; ++q) {
            isolated[q].step(n_in[q], 0.0);
            CHECK(record.transmittance[q] ==
                  doctest::Approx(isolated[q].transmittance()).epsilon(1e-12));
        }
    }
}

TEST_CASE("cyclic covariance of the network") {
    const int size = 4;
    MemParams params = make_params(6.0, 1.0, 2.0, inflection_point(size), 10.0);
    auto basis = FockBasis::make(size, 2);

    Occupation i = {0, 0, 0, 0}, j = {0, 0, 1, 1};
    Occupation js = {1, 0, 0, 1};  // j cyclically shifted by one

    PqmtNetwork a(size, params), b(size, params);
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> angle(0.0, M_PI);
    for (int step = 0; step < 20; ++step) {
        double phase = angle(rng);
        auto [rho_a, rec_a] = a.step(pair_drive(basis, i, j, phase));
        auto [rho_b, rec_b] = b.step(pair_drive(basis, i, js, phase));
        for (int q = 0; q < size; ++q)
            CHECK(rec_b.transmittance[(q + 1) % size] ==
                  doctest::Approx(rec_a.transmittance[q]).epsilon(1e-10));
        CHECK(rec_b.gamma_out == doctest::Approx(rec_a.gamma_out).epsilon(1e-10));
    }
}

TEST_CASE("attenuation channels on distinct modes commute") {
    auto basis = FockBasis::make(3, 2);
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    PureState psi = PureState::vacuum(basis);
    for (int k = 0; k < basis->size(); ++k)
        psi.amplitudes(k) = Complex(uniform(rng), uniform(rng));
    normalize(psi);
    MixedState rho = pure_to_mixed(psi);
    const double t0 = 0.3, t1 = 0.7, t2 = 0.9;

    MixedState forward =
        attenuation_channel(attenuation_channel(attenuation_channel(rho, 0, t0), 1, t1), 2, t2);
    MixedState backward =
        attenuation_channel(attenuation_channel(attenuation_channel(rho, 2, t2), 1, t1), 0, t0);
    CHECK((forward.matrix - backward.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("run_periodic tagging and steady state") {
    const int size = 2;
    const int spc = 40;
    MemParams params = make_params(0.3, 1.0 / spc, 2.0, inflection_point(size), 10.0);
    PqmtNetwork net(size, params);
    auto basis = FockBasis::make(size, 2);
    auto drive = [&](double t) {
        return pair_drive(basis, {0, 0}, {1, 1}, M_PI * t / 1.0);
    };
    auto records = run_periodic(net, drive, 1.0, 6, spc);
    REQUIRE(records.size() == 6 * spc);

    int first = 0, second = 0;
    for (const auto& r : records)
        if (r.cycle == 5) (r.first_half ? first : second)++;
    CHECK(first == spc / 2);
    CHECK(second == spc / 2);

    // After the transient, consecutive cycles agree.
    for (int k = 0; k < spc; ++k) {
        const auto& a = records[4 * spc + k];
        const auto& b = records[5 * spc + k];
        CHECK(std::abs(a.gamma_out - b.gamma_out) < 1e-6);
    }
    CHECK_THROWS((void)run_periodic(net, drive, 1.0, 0, spc));
    CHECK_THROWS((void)run_periodic(net, drive, 1.0, 1, 1));
}
