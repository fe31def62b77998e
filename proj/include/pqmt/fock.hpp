#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <memory>
#include <vector>

namespace pqmt {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Photon occupation per mode, e.g. {0,1,1} for |011>.
using Occupation = std::vector<int>;

/// All occupations of `modes` modes with total photon number <= photon_bound,
/// in graded lexicographic order: ascending total photon number, then
/// lexicographic within each grade.
class FockBasis {
public:
    static std::shared_ptr<const FockBasis> make(int modes, int photon_bound);

    int modes() const { return modes_; }
    int photon_bound() const { return photon_bound_; }
    int size() const { return static_cast<int>(occupations_.size()); }

    const Occupation& occupation(int index) const { return occupations_.at(index); }
    const std::vector<Occupation>& occupations() const { return occupations_; }
    int total_photons(int index) const { return totals_.at(index); }

    /// Contiguous index of an occupation; throws std::out_of_range if absent.
    int index_of(const Occupation& occ) const;
    bool contains(const Occupation& occ) const { return index_.count(occ) != 0; }

private:
    FockBasis(int modes, int photon_bound);

    int modes_;
    int photon_bound_;
    std::vector<Occupation> occupations_;
    std::vector<int> totals_;
    std::map<Occupation, int> index_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

struct PureState {
    BasisPtr basis;
    Vector amplitudes;

    static PureState vacuum(BasisPtr basis);
    static PureState fock(BasisPtr basis, const Occupation& occ);
};

struct MixedState {
    BasisPtr basis;
    Matrix matrix;

    static MixedState vacuum(BasisPtr basis);
};

PureState& normalize(PureState& state);
MixedState pure_to_mixed(const PureState& state);

double mean_photon_number(const PureState& state, int mode);
double mean_photon_number(const MixedState& state, int mode);

/// Trace out every mode not listed in `keep`; the reduced state lives on a
/// basis with the same photon bound. `keep` must be nonempty, sorted unique.
MixedState partial_trace(const MixedState& state, const std::vector<int>& keep);

/// Occupation concatenation into a basis with the given photon bound. Product
/// components exceeding the bound are an error unless truncation is allowed.
PureState tensor_product(const PureState& a, const PureState& b, int photon_bound,
                         bool allow_truncation = false);
MixedState tensor_product(const MixedState& a, const MixedState& b, int photon_bound,
                          bool allow_truncation = false);

double trace_real(const MixedState& state);
double hermiticity_error(const MixedState& state);

}  // namespace pqmt
