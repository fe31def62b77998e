#pragma once

#include "pqmt/fock.hpp"
#include "pqmt/memdevice.hpp"

#include <functional>
#include <vector>

namespace pqmt {

/// Whether a sample enters the history window before or after the channel is
/// applied within one time step. The integration window is closed at t, so
/// update-then-transmit is the default.
enum class UpdateOrder { update_then_transmit, transmit_then_update };

/// Per-step observables of the two-mode device harness (input A, gate E).
struct DeviceRecord {
    double time = 0.0;
    int cycle = 0;
    bool first_half = true;
    double n_in = 0.0;       ///< <n_A>
    double n_gate = 0.0;     ///< <n_E>
    double n_out = 0.0;      ///< <n_C>
    double transmittance = 0.0;
    double gamma_in = 0.0;   ///< coherence of the reduced input at A
    double gamma_out = 0.0;  ///< coherence of the output at C
};

/// One step of a single PQMT: measure (nA, nE) from the joint input, update
/// the unit, attenuate mode A at the unit's T, trace out the gate mode.
std::pair<MixedState, DeviceRecord> device_step(
    PqmtUnit& unit, const MixedState& rho_ae,
    UpdateOrder order = UpdateOrder::update_then_transmit);

/// Per-step observables of the N-mode network.
struct StepRecord {
    double time = 0.0;
    int cycle = 0;
    bool first_half = true;
    std::vector<double> n_in;           ///< per-mode <n_A>
    std::vector<double> transmittance;  ///< per-unit T
    std::vector<double> n_out;          ///< per-mode <n_C>
    double gamma_in = 0.0;
    double gamma_out = 0.0;
};

/// N PQMT units in parallel with cyclic gate coupling: the gate of unit q
/// reads the input photon number of mode (q+1) mod N.
class PqmtNetwork {
public:
    PqmtNetwork(int size, const MemParams& params,
                UpdateOrder order = UpdateOrder::update_then_transmit);

    int size() const { return static_cast<int>(units_.size()); }
    const MemParams& params() const { return params_; }
    std::vector<PqmtUnit>& units() { return units_; }
    const std::vector<PqmtUnit>& units() const { return units_; }
    std::vector<double> transmittances() const;
    void reset();

    /// Gate reads use a synchronous snapshot of all per-mode <n_A> taken
    /// before any unit updates.
    std::pair<MixedState, StepRecord> step(const PureState& psi_in, double time = 0.0);

    /// Update the units from a pre-gathered <n_A> snapshot without touching
    /// any quantum state (the reservoir column loop needs only this).
    void update_units(const std::vector<double>& n_in);

private:
    std::vector<PqmtUnit> units_;
    MemParams params_;
    UpdateOrder order_;
};

/// Drive the network through cycles * steps_per_cycle uniform steps of the
/// periodic input; dt = tau_osc / steps_per_cycle must match params().dt.
std::vector<StepRecord> run_periodic(PqmtNetwork& net,
                                     const std::function<PureState(double)>& drive,
                                     double tau_osc, int cycles, int steps_per_cycle);

}  // namespace pqmt
