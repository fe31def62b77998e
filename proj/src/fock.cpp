#include "pqmt/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace pqmt {

namespace {

void enumerate_compositions(int modes, int total, Occupation& current,
                            std::vector<Occupation>& out) {
    if (static_cast<int>(current.size()) == modes - 1) {
        current.push_back(total);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (int k = 0; k <= total; ++k) {
        current.push_back(k);
        enumerate_compositions(modes, total - k, current, out);
        current.pop_back();
    }
}

}  // namespace

FockBasis::FockBasis(int modes, int photon_bound)
    : modes_(modes), photon_bound_(photon_bound) {
    if (modes < 1) throw std::invalid_argument("FockBasis: mode count must be >= 1");
    if (photon_bound < 0) throw std::invalid_argument("FockBasis: photon bound must be >= 0");

    for (int n = 0; n <= photon_bound; ++n) {
        Occupation current;
        enumerate_compositions(modes, n, current, occupations_);
    }
    totals_.reserve(occupations_.size());
    for (int i = 0; i < static_cast<int>(occupations_.size()); ++i) {
        int total = 0;
        for (int n : occupations_[i]) total += n;
        totals_.push_back(total);
        index_.emplace(occupations_[i], i);
    }
}

std::shared_ptr<const FockBasis> FockBasis::make(int modes, int photon_bound) {
    return std::shared_ptr<const FockBasis>(new FockBasis(modes, photon_bound));
}

int FockBasis::index_of(const Occupation& occ) const {
    auto it = index_.find(occ);
    if (it == index_.end())
        throw std::out_of_range("FockBasis: occupation not in basis");
    return it->second;
}

PureState PureState::vacuum(BasisPtr basis) {
    Vector amps = Vector::Zero(basis->size());
    amps(0) = 1.0;
    return PureState{std::move(basis), std::move(amps)};
}

PureState PureState::fock(BasisPtr basis, const Occupation& occ) {
    Vector amps = Vector::Zero(basis->size());
    amps(basis->index_of(occ)) = 1.0;
    return PureState{std::move(basis), std::move(amps)};
}

MixedState MixedState::vacuum(BasisPtr basis) {
    Matrix m = Matrix::Zero(basis->size(), basis->size());
    m(0, 0) = 1.0;
    return MixedState{std::move(basis), std::move(m)};
}

PureState& normalize(PureState& state) {
    double norm = state.amplitudes.norm();
    if (norm <= 0.0) throw std::invalid_argument("normalize: zero state");
    state.amplitudes /= norm;
    return state;
}

MixedState pure_to_mixed(const PureState& state) {
    return MixedState{state.basis, state.amplitudes * state.amplitudes.adjoint()};
}

double mean_photon_number(const PureState& state, int mode) {
    const FockBasis& basis = *state.basis;
    if (mode < 0 || mode >= basis.modes())
        throw std::out_of_range("mean_photon_number: mode out of range");
    double mean = 0.0;
    for (int i = 0; i < basis.size(); ++i)
        mean += std::norm(state.amplitudes(i)) * basis.occupation(i)[mode];
    return mean;
}

double mean_photon_number(const MixedState& state, int mode) {
    const FockBasis& basis = *state.basis;
    if (mode < 0 || mode >= basis.modes())
        throw std::out_of_range("mean_photon_number: mode out of range");
    double mean = 0.0;
    for (int i = 0; i < basis.size(); ++i)
        mean += std::real(state.matrix(i, i)) * basis.occupation(i)[mode];
    return mean;
}

MixedState partial_trace(const MixedState& state, const std::vector<int>& keep) {
    const FockBasis& basis = *state.basis;
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
    for (std::size_t k = 0; k < keep.size(); ++k) {
        if (keep[k] < 0 || keep[k] >= basis.modes())
            throw std::out_of_range("partial_trace: mode out of range");
        if (k > 0 && keep[k] <= keep[k - 1])
            throw std::invalid_argument("partial_trace: keep must be sorted unique");
    }
    if (static_cast<int>(keep.size()) == basis.modes())
        return state;

    std::vector<int> discard;
    {
        std::size_t ki = 0;
        for (int m = 0; m < basis.modes(); ++m) {
            if (ki < keep.size() && keep[ki] == m) { ++ki; continue; }
            discard.push_back(m);
        }
    }

    BasisPtr reduced_basis = FockBasis::make(static_cast<int>(keep.size()),
                                             basis.photon_bound());
    const int dim = basis.size();

    // Precompute each full-basis index's (kept index, discarded occupation).
    std::vector<int> kept_index(dim);
    std::vector<Occupation> discarded(dim);
    Occupation kept_occ(keep.size());
    Occupation disc_occ(discard.size());
    for (int i = 0; i < dim; ++i) {
        const Occupation& occ = basis.occupation(i);
        for (std::size_t k = 0; k < keep.size(); ++k) kept_occ[k] = occ[keep[k]];
        for (std::size_t k = 0; k < discard.size(); ++k) disc_occ[k] = occ[discard[k]];
        kept_index[i] = reduced_basis->index_of(kept_occ);
        discarded[i] = disc_occ;
    }

    Matrix reduced = Matrix::Zero(reduced_basis->size(), reduced_basis->size());
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (discarded[i] == discarded[j])
                reduced(kept_index[i], kept_index[j]) += state.matrix(i, j);
    return MixedState{std::move(reduced_basis), std::move(reduced)};
}

PureState tensor_product(const PureState& a, const PureState& b, int photon_bound,
                         bool allow_truncation) {
    const FockBasis& ba = *a.basis;
    const FockBasis& bb = *b.basis;
    BasisPtr basis = FockBasis::make(ba.modes() + bb.modes(), photon_bound);
    Vector amps = Vector::Zero(basis->size());
    for (int i = 0; i < ba.size(); ++i) {
        if (a.amplitudes(i) == 0.0) continue;
        for (int j = 0; j < bb.size(); ++j) {
            Complex amp = a.amplitudes(i) * b.amplitudes(j);
            if (amp == 0.0) continue;
            if (ba.total_photons(i) + bb.total_photons(j) > photon_bound) {
                if (allow_truncation) continue;
                throw std::invalid_argument(
                    "tensor_product: component exceeds photon bound");
            }
            Occupation occ = ba.occupation(i);
            occ.insert(occ.end(), bb.occupation(j).begin(), bb.occupation(j).end());
            amps(basis->index_of(occ)) = amp;
        }
    }
    return PureState{std::move(basis), std::move(amps)};
}

MixedState tensor_product(const MixedState& a, const MixedState& b, int photon_bound,
                          bool allow_truncation) {
    const FockBasis& ba = *a.basis;
    const FockBasis& bb = *b.basis;
    BasisPtr basis = FockBasis::make(ba.modes() + bb.modes(), photon_bound);
    const int da = ba.size(), db = bb.size();

    std::vector<int> product_index(static_cast<std::size_t>(da) * db, -1);
    for (int i = 0; i < da; ++i) {
        for (int j = 0; j < db; ++j) {
            if (ba.total_photons(i) + bb.total_photons(j) > photon_bound) {
                bool populated = std::real(a.matrix(i, i)) > 1e-15 &&
                                 std::real(b.matrix(j, j)) > 1e-15;
                if (populated && !allow_truncation)
                    throw std::invalid_argument(
                        "tensor_product: component exceeds photon bound");
                continue;
            }
            Occupation occ = ba.occupation(i);
            occ.insert(occ.end(), bb.occupation(j).begin(), bb.occupation(j).end());
            product_index[static_cast<std::size_t>(i) * db + j] = basis->index_of(occ);
        }
    }

    Matrix m = Matrix::Zero(basis->size(), basis->size());
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) {
            int row = product_index[static_cast<std::size_t>(i) * db + j];
            if (row < 0) continue;
            for (int k = 0; k < da; ++k)
                for (int l = 0; l < db; ++l) {
                    int col = product_index[static_cast<std::size_t>(k) * db + l];
                    if (col < 0) continue;
                    m(row, col) = a.matrix(i, k) * b.matrix(j, l);
                }
        }
    return MixedState{std::move(basis), std::move(m)};
}

double trace_real(const MixedState& state) {
    return std::real(state.matrix.trace());
}

double hermiticity_error(const MixedState& state) {
    return (state.matrix - state.matrix.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace pqmt
