#include "pqmt/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace pqmt {

namespace {

constexpr int kImageSide = 28;

MemParams reservoir_mem_params(const ReservoirConfig& config) {
    MemParams params;
    params.dt = 1.0;  // one column = one time step
    params.tau_int = static_cast<double>(config.window);
    params.n_max = config.n_max;
    params.p = std::isnan(config.p) ? inflection_point(config.modes) : config.p;
    params.d = config.d;
    return params;
}

}  // namespace

void ReservoirConfig::validate() const {
    if (modes < 1) throw std::invalid_argument("ReservoirConfig: modes must be >= 1");
    if (photon_bound < 1)
        throw std::invalid_argument("ReservoirConfig: photon bound must be >= 1");
    if (!(n_max > 0.0)) throw std::invalid_argument("ReservoirConfig: n_max must be > 0");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("ReservoirConfig: epsilon must be > 0");
    if (window < 1) throw std::invalid_argument("ReservoirConfig: window must be >= 1");
    if (!std::isnan(p) && !(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("ReservoirConfig: p outside [0,1]");
    if (!(d >= 0.0)) throw std::invalid_argument("ReservoirConfig: d must be >= 0");
}

Reservoir::Reservoir(const ReservoirConfig& config)
    : config_(config),
      basis_(FockBasis::make(config.modes, config.photon_bound)),
      network_(config.modes, reservoir_mem_params(config)) {
    config_.validate();
    if (basis_->size() < kImageSide + 1)
        throw std::invalid_argument("Reservoir: basis too small for column encoding");
    lifted_u1_ = lift_to_fock(haar_random_unitary(config.modes, config.seed_u1), *basis_);
    lifted_u2_ = lift_to_fock(haar_random_unitary(config.modes, config.seed_u2), *basis_);
}

PureState Reservoir::encode_column(std::span<const double> column) const {
    if (column.size() != kImageSide)
        throw std::invalid_argument("encode_column: expected 28 values");
    Vector amps = Vector::Zero(basis_->size());
    for (int j = 0; j < kImageSide; ++j) {
        if (!(column[j] >= 0.0 && column[j] <= 1.0))
            throw std::invalid_argument("encode_column: value outside [0,1]");
        // Basis index 0 is the vacuum; pixels map to states 1..28.
        amps(j + 1) = column[j] + config_.epsilon;
    }
    PureState state{basis_, std::move(amps)};
    return normalize(state);
}

ImageResult Reservoir::process_image(std::span<const float> image, int label) {
    if (image.size() != kImageSide * kImageSide)
        throw std::invalid_argument("process_image: expected a 28x28 image");
    if (config_.reset_per_image) network_.reset();

    const int modes = config_.modes;
    std::vector<double> column(kImageSide);
    std::vector<double> n_in(modes);
    Vector mixed_column;

    // During the column loop only the per-mode <n_A> after the first mixing
    // layer feeds the updates; no channel or second layer is needed yet.
    for (int k = 0; k < kImageSide; ++k) {
        for (int j = 0; j < kImageSide; ++j)
            column[j] = static_cast<double>(image[j * kImageSide + k]);
        PureState encoded = encode_column(column);
        mixed_column = lifted_u1_ * encoded.amplitudes;
        for (int m = 0; m < modes; ++m) {
            double mean = 0.0;
            for (int i = 0; i < basis_->size(); ++i)
                mean += std::norm(mixed_column(i)) * basis_->occupation(i)[m];
            n_in[m] = mean;
        }
        network_.update_units(n_in);
    }

    ImageResult result;
    result.label = label;
    result.transmittance = network_.transmittances();

    // Readout: re-inject the final column state at frozen transmittances
    // (optionally updating once more), attenuate every mode, mix with the
    // second layer, and read the diagonal.
    if (!config_.freeze_readout) {
        network_.update_units(n_in);
        result.transmittance = network_.transmittances();
    }
    std::vector<Vector> branches = {mixed_column};
    for (int m = 0; m < modes; ++m) {
        std::vector<Vector> next;
        for (const Vector& branch : branches) {
            auto split = attenuation_branches(*basis_, branch, m,
                                              result.transmittance[m]);
            next.insert(next.end(), std::make_move_iterator(split.begin()),
                        std::make_move_iterator(split.end()));
        }
        branches = std::move(next);
    }
    Matrix branch_matrix(basis_->size(), static_cast<int>(branches.size()));
    for (int b = 0; b < static_cast<int>(branches.size()); ++b)
        branch_matrix.col(b) = branches[b];
    Matrix mixed = lifted_u2_ * branch_matrix;

    result.features.assign(basis_->size(), 0.0);
    for (int i = 0; i < basis_->size(); ++i)
        for (int b = 0; b < mixed.cols(); ++b)
            result.features[i] += std::norm(mixed(i, b));
    return result;
}

std::vector<ImageResult> Reservoir::run_dataset(
    const std::vector<std::vector<float>>& images, const std::vector<int>& labels,
    int jobs) const {
    if (images.size() != labels.size())
        throw std::invalid_argument("run_dataset: images/labels misaligned");
    std::vector<ImageResult> results(images.size());
    auto worker = [&](std::size_t begin, std::size_t end) {
        // Each task owns a private reservoir so histories never interleave.
        Reservoir local(*this);
        for (std::size_t k = begin; k < end; ++k)
            results[k] = local.process_image(images[k], labels[k]);
    };
    // Without per-image reset the images form one sequence; keep it ordered.
    const int thread_count = config_.reset_per_image ? std::max(1, jobs) : 1;
    if (thread_count == 1 || images.size() < 2) {
        worker(0, images.size());
    } else {
        std::vector<std::thread> threads;
        const std::size_t chunk = (images.size() + thread_count - 1) / thread_count;
        for (int t = 0; t < thread_count; ++t) {
            std::size_t begin = std::min(images.size(), t * chunk);
            std::size_t end = std::min(images.size(), begin + chunk);
            if (begin < end) threads.emplace_back(worker, begin, end);
        }
        for (auto& th : threads) th.join();
    }
    return results;
}

}  // namespace pqmt
