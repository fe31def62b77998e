#pragma once

#include "pqmt/network.hpp"
#include "pqmt/optics.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace pqmt {

/// Nine memory-shared units embedded between two Haar-random mixing layers,
/// truncated at three photons total.
struct ReservoirConfig {
    int modes = 9;
    int photon_bound = 3;
    double n_max = 3.0;
    double epsilon = 1e-8;     ///< encoding floor for all-black columns
    std::uint64_t seed_u1 = 1;
    std::uint64_t seed_u2 = 2;
    double d = 0.0;
    double p = std::nan("");   ///< NaN: inflection_point(modes)
    int window = 6;            ///< memory window in column steps
    bool reset_per_image = true;
    bool freeze_readout = true;

    void validate() const;
};

struct ImageResult {
    std::vector<double> transmittance;  ///< final per-unit T (9 entries)
    std::vector<double> features;       ///< readout probabilities (220 entries)
    int label = -1;
};

class Reservoir {
public:
    explicit Reservoir(const ReservoirConfig& config);

    /// Column of 28 grayscale values in [0,1] -> 9-mode pure state with
    /// amplitudes (a_j + epsilon) on the first 28 non-vacuum basis states.
    PureState encode_column(std::span<const double> column) const;

    /// Inject all 28 columns (one unit update per column), record the final
    /// transmittance vector, then re-inject the last column at frozen T and
    /// read the photon-number-resolved output distribution.
    ImageResult process_image(std::span<const float> image, int label);

    std::vector<ImageResult> run_dataset(const std::vector<std::vector<float>>& images,
                                         const std::vector<int>& labels, int jobs = 1) const;

    const FockBasis& basis() const { return *basis_; }
    BasisPtr basis_ptr() const { return basis_; }
    const Matrix& lifted_u1() const { return lifted_u1_; }
    const Matrix& lifted_u2() const { return lifted_u2_; }
    const ReservoirConfig& config() const { return config_; }
    PqmtNetwork& network() { return network_; }

private:
    ReservoirConfig config_;
    BasisPtr basis_;
    Matrix lifted_u1_;
    Matrix lifted_u2_;
    PqmtNetwork network_;
};

}  // namespace pqmt
