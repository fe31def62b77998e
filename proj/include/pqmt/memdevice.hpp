#pragma once

#include <span>
#include <utility>
#include <vector>

namespace pqmt {

/// Shared update-law parameters of a memristive unit. Time quantities are in
/// the same unit as the drive period.
struct MemParams {
    double tau_int = 1.0;  ///< characteristic memory time
    double dt = 1.0;       ///< simulation time step
    double n_max = 1.0;    ///< maximum mean photon number
    double p = 0.5;        ///< gating inflection point in [0,1]
    double d = 0.0;        ///< memory-sharing strength >= 0

    /// Discrete history window w = round(tau_int/dt), at least 1.
    int window() const;
    void validate() const;  // throws std::invalid_argument
};

/// Fixed-length ring buffer of (nA, nE) mean-photon samples, always full.
class HistoryBuffer {
public:
    HistoryBuffer(int window, double initial_na, double initial_ne);

    void push(double na, double ne);
    void fill(double na, double ne);
    int window() const { return static_cast<int>(samples_.size()); }

    /// Samples in ring order; the update-law means are order-invariant.
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }
    /// Samples oldest-to-newest.
    std::vector<std::pair<double, double>> chronological() const;
    std::pair<double, double> last() const;

private:
    std::vector<std::pair<double, double>> samples_;
    int head_ = 0;  // next slot to overwrite
};

/// Memoryless-free transmittance: T = 0.5 + mean(0.5 - nA/n_max), clamped.
double pqmr_transmittance(std::span<const double> na_history, double n_max);

/// Joint history map: x = 0.5 + mean(0.5 - sqrt((nA/n_max)(1 - nE/n_max))),
/// clamped to [0,1].
double history_map(std::span<const std::pair<double, double>> history, double n_max);

/// Piecewise-exponential sigmoid with G(1) = 1 and C1 continuity at x = p.
double gate_function(double x, double p, double d);

double pqmt_transmittance(const HistoryBuffer& history, const MemParams& params);

/// Network-size-dependent inflection point p = 1 - sqrt((1/N)(1 - 1/N)).
double inflection_point(int network_size);

/// Input photon number from the reflected-port measurement: nA = nD/(1-T).
/// Throws for T = 1 (nothing reaches the measured port).
double infer_input_photons(double nd, double transmittance);

/// One memristive element: history buffer plus the derived (T, theta) state,
/// with T = cos^2(theta/2).
class PqmtUnit {
public:
    explicit PqmtUnit(const MemParams& params);

    /// Push a clamped (nA, nE) sample and recompute (T, theta). The new T
    /// governs the current time step's transmission.
    void step(double na, double ne);

    /// Restore the neutral startup buffer (nA = n_max/2, nE = n_max).
    void reset();

    double transmittance() const { return transmittance_; }
    double theta() const { return theta_; }
    /// T_PQMR of the current buffer, ignoring the gate (reduction checks).
    double pqmr_component() const;
    const MemParams& params() const { return params_; }
    const HistoryBuffer& history() const { return history_; }

private:
    void recompute();

    MemParams params_;
    HistoryBuffer history_;
    double transmittance_ = 0.5;
    double theta_ = 0.0;
};

}  // namespace pqmt
