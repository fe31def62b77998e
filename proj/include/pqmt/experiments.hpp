#pragma once

#include "pqmt/metrics.hpp"
#include "pqmt/network.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace pqmt {

/// Periodic-drive settings shared by the hysteresis studies. `p` defaults to
/// NaN, meaning "derive from the network size via inflection_point".
struct HysteresisSettings {
    double tau_ratio = 0.3;  ///< tau_int / tau_osc
    double tau_osc = 1.0;
    int steps_per_cycle = 400;
    int transient_cycles = 4;
    int max_cycles = 32;
    double steady_tol = 1e-6;
    double n_max = 1.0;
    double p = std::nan("");
    double d = 0.0;
    UpdateOrder order = UpdateOrder::update_then_transmit;

    MemParams mem_params(double resolved_p) const;
    double resolved_p(int network_size) const;
};

/// Sinusoidal two-mode drive:
///   (cos(pi t/tau)|0> + sin(pi t/tau)|1>) x (sqrt(1-nE)|0> + sqrt(nE)|1>).
PureState device_drive_state(double t, double tau_osc, double ne_level,
                             const BasisPtr& basis);

/// Device run until the last two cycles agree within steady_tol of the
/// observable range (cycle count doubles up to max_cycles). Only the records
/// of the final run are returned.
std::vector<DeviceRecord> run_device_periodic(const HysteresisSettings& settings,
                                              double ne_level);

struct DeviceHysteresis {
    double ne_level = 0.0;
    LoopCurve photon_curve;     ///< (<n_A>, <n_C>)
    LoopCurve coherence_curve;  ///< (gamma_A, gamma_C)
    double area_photon = 0.0;
    double area_coherence = 0.0;
    std::vector<DeviceRecord> records;
};

std::vector<DeviceHysteresis> run_device_hysteresis(const HysteresisSettings& settings,
                                                    std::span<const double> ne_levels);

struct NetworkHysteresis {
    Occupation state_i, state_j;
    LoopCurve curve;  ///< (gamma_in, gamma_out)
    double area = 0.0;
    std::vector<StepRecord> records;
};

/// Cyclic network under cos|i> + sin|j> drive; p from inflection_point(N)
/// unless overridden in the settings.
NetworkHysteresis run_network_hysteresis(int network_size,
                                         const HysteresisSettings& settings,
                                         const Occupation& state_i,
                                         const Occupation& state_j);

struct EnsembleRealization {
    Occupation state_i, state_j;
    double area = 0.0;
};

struct EnsembleResult {
    double tau_ratio = 0.0;
    std::vector<EnsembleRealization> realizations;
    double mean_area = 0.0;
};

/// All unordered pairs of N-mode Fock states with total photons <= 2.
std::vector<EnsembleResult> run_ensemble(int network_size,
                                         const HysteresisSettings& settings,
                                         std::span<const double> tau_ratios,
                                         bool include_vacuum_pairs = true,
                                         int jobs = 1);

/// Mean hysteresis area of |i> over all partners |j> != |i> in the <=2-photon
/// basis. The vacuum is rejected as |i| but allowed as a partner.
double marginal_hysteresis(const Occupation& state_i,
                           const HysteresisSettings& settings, int network_size);

/// The <=2-photon drive-state family used by the ensemble studies.
std::vector<Occupation> ensemble_states(int network_size);

}  // namespace pqmt
