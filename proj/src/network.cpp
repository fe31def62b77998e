#include "pqmt/network.hpp"

#include "pqmt/metrics.hpp"
#include "pqmt/optics.hpp"

#include <cmath>
#include <stdexcept>

namespace pqmt {

std::pair<MixedState, DeviceRecord> device_step(PqmtUnit& unit, const MixedState& rho_ae,
                                                UpdateOrder order) {
    if (rho_ae.basis->modes() != 2)
        throw std::invalid_argument("device_step: expected a 2-mode input state");

    DeviceRecord rec;
    rec.n_in = mean_photon_number(rho_ae, 0);
    rec.n_gate = mean_photon_number(rho_ae, 1);

    MixedState rho_a = partial_trace(rho_ae, {0});
    rec.gamma_in = l1_coherence(rho_a);

    if (order == UpdateOrder::update_then_transmit) unit.step(rec.n_in, rec.n_gate);
    rec.transmittance = unit.transmittance();

    MixedState attenuated = attenuation_channel(rho_ae, 0, rec.transmittance);
    MixedState rho_c = partial_trace(attenuated, {0});

    if (order == UpdateOrder::transmit_then_update) unit.step(rec.n_in, rec.n_gate);

    rec.n_out = mean_photon_number(rho_c, 0);
    rec.gamma_out = l1_coherence(rho_c);
    return {std::move(rho_c), rec};
}

PqmtNetwork::PqmtNetwork(int size, const MemParams& params, UpdateOrder order)
    : params_(params), order_(order) {
    if (size < 1) throw std::invalid_argument("PqmtNetwork: size must be >= 1");
    params_.validate();
    units_.reserve(size);
    for (int q = 0; q < size; ++q) units_.emplace_back(params_);
}

std::vector<double> PqmtNetwork::transmittances() const {
    std::vector<double> out;
    out.reserve(units_.size());
    for (const auto& u : units_) out.push_back(u.transmittance());
    return out;
}

void PqmtNetwork::reset() {
    for (auto& u : units_) u.reset();
}

void PqmtNetwork::update_units(const std::vector<double>& n_in) {
    const int n = size();
    if (static_cast<int>(n_in.size()) != n)
        throw std::invalid_argument("PqmtNetwork: snapshot size mismatch");
    for (int q = 0; q < n; ++q) units_[q].step(n_in[q], n_in[(q + 1) % n]);
}

std::pair<MixedState, StepRecord> PqmtNetwork::step(const PureState& psi_in, double time) {
    const int n = size();
    if (psi_in.basis->modes() != n)
        throw std::invalid_argument("PqmtNetwork: mode-count mismatch");

    StepRecord rec;
    rec.time = time;
    rec.n_in.resize(n);
    for (int q = 0; q < n; ++q) rec.n_in[q] = mean_photon_number(psi_in, q);
    rec.gamma_in = l1_coherence(psi_in);

    if (order_ == UpdateOrder::update_then_transmit) update_units(rec.n_in);
    rec.transmittance = transmittances();

    MixedState rho = pure_to_mixed(psi_in);
    for (int q = 0; q < n; ++q)
        rho = attenuation_channel(rho, q, rec.transmittance[q]);

    if (order_ == UpdateOrder::transmit_then_update) update_units(rec.n_in);

    rec.n_out.resize(n);
    for (int q = 0; q < n; ++q) rec.n_out[q] = mean_photon_number(rho, q);
    rec.gamma_out = l1_coherence(rho);
    return {std::move(rho), std::move(rec)};
}

std::vector<StepRecord> run_periodic(PqmtNetwork& net,
                                     const std::function<PureState(double)>& drive,
                                     double tau_osc, int cycles, int steps_per_cycle) {
    if (cycles < 1) throw std::invalid_argument("run_periodic: cycles must be >= 1");
    if (steps_per_cycle < 2)
        throw std::invalid_argument("run_periodic: steps_per_cycle must be >= 2");
    const double dt = tau_osc / steps_per_cycle;
    std::vector<StepRecord> records;
    records.reserve(static_cast<std::size_t>(cycles) * steps_per_cycle);
    for (int c = 0; c < cycles; ++c) {
        for (int k = 0; k < steps_per_cycle; ++k) {
            const double t = (static_cast<double>(c) * steps_per_cycle + k) * dt;
            auto [rho, rec] = net.step(drive(t), t);
            rec.cycle = c;
            rec.first_half = k < steps_per_cycle / 2;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

}  // namespace pqmt
