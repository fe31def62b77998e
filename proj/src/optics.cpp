#include "pqmt/optics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace pqmt {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

// x^k with the 0^0 = 1 convention.
double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

}  // namespace

double ModeUnitary::unitarity_error() const {
    Matrix residual = matrix.adjoint() * matrix -
                      Matrix::Identity(matrix.rows(), matrix.cols());
    return residual.cwiseAbs().maxCoeff();
}

ModeUnitary mzi_unitary(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Matrix m(2, 2);
    m << Complex(c, 0), Complex(0, s),
         Complex(0, s), Complex(c, 0);
    return ModeUnitary{std::move(m)};
}

ModeUnitary haar_random_unitary(int dimension, std::uint64_t seed) {
    if (dimension < 1)
        throw std::invalid_argument("haar_random_unitary: dimension must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix z(dimension, dimension);
    for (int i = 0; i < dimension; ++i)
        for (int j = 0; j < dimension; ++j) {
            double re = gauss(rng);
            double im = gauss(rng);
            z(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(dimension, dimension);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dimension; ++j) {
        Complex diag = r(j, j);
        double mag = std::abs(diag);
        Complex phase = mag > 0.0 ? diag / mag : Complex(1.0, 0.0);
        q.col(j) *= phase;
    }
    return ModeUnitary{std::move(q)};
}

ModeUnitary embed_pair(const ModeUnitary& u, int dimension, int a, int b) {
    if (u.dimension() != 2)
        throw std::invalid_argument("embed_pair: expected a 2x2 unitary");
    if (a == b || a < 0 || b < 0 || a >= dimension || b >= dimension)
        throw std::invalid_argument("embed_pair: invalid mode pair");
    Matrix m = Matrix::Identity(dimension, dimension);
    m(a, a) = u.matrix(0, 0);
    m(a, b) = u.matrix(0, 1);
    m(b, a) = u.matrix(1, 0);
    m(b, b) = u.matrix(1, 1);
    return ModeUnitary{std::move(m)};
}

Complex permanent_direct(const Matrix& m) {
    const int k = static_cast<int>(m.rows());
    if (m.cols() != k) throw std::invalid_argument("permanent: non-square input");
    if (k == 0) return Complex(1.0, 0.0);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    Complex sum(0.0, 0.0);
    do {
        Complex term(1.0, 0.0);
        for (int i = 0; i < k; ++i) term *= m(i, perm[i]);
        sum += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

Complex permanent_ryser(const Matrix& m) {
    const int k = static_cast<int>(m.rows());
    if (m.cols() != k) throw std::invalid_argument("permanent: non-square input");
    if (k == 0) return Complex(1.0, 0.0);
    Complex sum(0.0, 0.0);
    const std::uint64_t full = (std::uint64_t{1} << k);
    for (std::uint64_t subset = 1; subset < full; ++subset) {
        Complex prod(1.0, 0.0);
        for (int i = 0; i < k; ++i) {
            Complex row_sum(0.0, 0.0);
            for (int j = 0; j < k; ++j)
                if (subset & (std::uint64_t{1} << j)) row_sum += m(i, j);
            prod *= row_sum;
        }
        int bits = std::popcount(subset);
        sum += ((k - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
    }
    return sum;
}

Complex permanent(const Matrix& m) {
    return m.rows() <= 5 ? permanent_direct(m) : permanent_ryser(m);
}

Matrix lift_to_fock(const ModeUnitary& u, const FockBasis& basis) {
    if (u.dimension() != basis.modes())
        throw std::invalid_argument("lift_to_fock: dimension mismatch");
    const int dim = basis.size();
    Matrix lifted = Matrix::Zero(dim, dim);

    std::vector<double> norms(dim);
    for (int i = 0; i < dim; ++i) {
        double prod = 1.0;
        for (int n : basis.occupation(i)) prod *= factorial(n);
        norms[i] = std::sqrt(prod);
    }

    // Mode index repeated per occupation, e.g. (0,2,1) -> [1,1,2].
    auto expand = [&](const Occupation& occ) {
        std::vector<int> modes;
        for (int m = 0; m < static_cast<int>(occ.size()); ++m)
            for (int c = 0; c < occ[m]; ++c) modes.push_back(m);
        return modes;
    };

    for (int row = 0; row < dim; ++row) {
        const int grade = basis.total_photons(row);
        std::vector<int> rows = expand(basis.occupation(row));
        for (int col = 0; col < dim; ++col) {
            if (basis.total_photons(col) != grade) continue;
            std::vector<int> cols = expand(basis.occupation(col));
            Matrix sub(grade, grade);
            for (int i = 0; i < grade; ++i)
                for (int j = 0; j < grade; ++j)
                    sub(i, j) = u.matrix(rows[i], cols[j]);
            lifted(row, col) = permanent(sub) / (norms[row] * norms[col]);
        }
    }
    return lifted;
}

PureState apply_mode_unitary(const PureState& state, const ModeUnitary& u) {
    Matrix lifted = lift_to_fock(u, *state.basis);
    return PureState{state.basis, lifted * state.amplitudes};
}

MixedState apply_mode_unitary(const MixedState& state, const ModeUnitary& u) {
    Matrix lifted = lift_to_fock(u, *state.basis);
    return MixedState{state.basis, lifted * state.matrix * lifted.adjoint()};
}

namespace {

// Per-k Kraus amplitude sqrt(C(n,k) T^(n-k) (1-T)^k) and the index of the
// basis state with k photons removed from `mode`.
struct KrausAction {
    int target;
    double amplitude;
};

std::vector<std::vector<KrausAction>> kraus_table(const FockBasis& basis, int mode,
                                                  double transmittance) {
    if (mode < 0 || mode >= basis.modes())
        throw std::out_of_range("attenuation_channel: mode out of range");
    if (transmittance < 0.0 || transmittance > 1.0)
        throw std::invalid_argument("attenuation_channel: transmittance outside [0,1]");
    const int max_loss = basis.photon_bound();
    std::vector<std::vector<KrausAction>> table(max_loss + 1);
    for (int k = 0; k <= max_loss; ++k) {
        table[k].resize(basis.size(), KrausAction{-1, 0.0});
        for (int i = 0; i < basis.size(); ++i) {
            int n = basis.occupation(i)[mode];
            if (n < k) continue;
            Occupation lowered = basis.occupation(i);
            lowered[mode] = n - k;
            double amp2 = binomial(n, k) * ipow(transmittance, n - k) *
                          ipow(1.0 - transmittance, k);
            table[k][i] = KrausAction{basis.index_of(lowered), std::sqrt(amp2)};
        }
    }
    return table;
}

}  // namespace

MixedState attenuation_channel(const MixedState& state, int mode, double transmittance) {
    const FockBasis& basis = *state.basis;
    auto table = kraus_table(basis, mode, transmittance);
    const int dim = basis.size();
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto& kraus : table)
        for (int i = 0; i < dim; ++i) {
            if (kraus[i].target < 0) continue;
            for (int j = 0; j < dim; ++j) {
                if (kraus[j].target < 0) continue;
                out(kraus[i].target, kraus[j].target) +=
                    kraus[i].amplitude * kraus[j].amplitude * state.matrix(i, j);
            }
        }
    return MixedState{state.basis, std::move(out)};
}

std::vector<Vector> attenuation_branches(const FockBasis& basis, const Vector& amplitudes,
                                         int mode, double transmittance) {
    auto table = kraus_table(basis, mode, transmittance);
    std::vector<Vector> branches;
    for (const auto& kraus : table) {
        Vector branch = Vector::Zero(basis.size());
        double weight = 0.0;
        for (int i = 0; i < basis.size(); ++i) {
            if (kraus[i].target < 0 || amplitudes(i) == 0.0) continue;
            branch(kraus[i].target) += kraus[i].amplitude * amplitudes(i);
            weight += std::norm(kraus[i].amplitude * amplitudes(i));
        }
        if (weight > 1e-30) branches.push_back(std::move(branch));
    }
    return branches;
}

}  // namespace pqmt
