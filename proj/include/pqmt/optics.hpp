#pragma once

#include "pqmt/fock.hpp"

#include <cstdint>
#include <vector>

namespace pqmt {

/// Unitary acting on the optical modes (not on Fock space directly).
struct ModeUnitary {
    Matrix matrix;

    int dimension() const { return static_cast<int>(matrix.rows()); }
    double unitarity_error() const;
};

/// Tunable Mach-Zehnder interferometer:
///   [[cos(theta/2), i sin(theta/2)], [i sin(theta/2), cos(theta/2)]]
/// Transmittance from the first mode to itself is cos^2(theta/2).
ModeUnitary mzi_unitary(double theta);

/// Haar-distributed unitary: QR of a complex standard-Gaussian matrix, with
/// Q's columns rescaled by the phases of R's diagonal. Deterministic per seed.
ModeUnitary haar_random_unitary(int dimension, std::uint64_t seed);

/// Embed a 2x2 mode unitary onto modes (a, b) of a `dimension`-mode identity.
ModeUnitary embed_pair(const ModeUnitary& u, int dimension, int a, int b);

/// Matrix permanent. Direct expansion for small k, Ryser for larger.
Complex permanent(const Matrix& m);
Complex permanent_direct(const Matrix& m);
Complex permanent_ryser(const Matrix& m);

/// Fock-space matrix of a mode unitary: <m|U|n> = perm(U[m,n]) / sqrt(prod m_i! prod n_j!)
/// with rows/columns of U repeated per occupation. Block diagonal across
/// photon-number grades.
Matrix lift_to_fock(const ModeUnitary& u, const FockBasis& basis);

PureState apply_mode_unitary(const PureState& state, const ModeUnitary& u);
MixedState apply_mode_unitary(const MixedState& state, const ModeUnitary& u);

/// Photon-loss channel on one mode with transmittance T, applied via Kraus
/// operators K_k (k photons lost):
///   <n|K_k^dag K_k|n> = C(n,k) T^(n-k) (1-T)^k.
MixedState attenuation_channel(const MixedState& state, int mode, double transmittance);

/// Unnormalized pure branches of the same channel: applying K_k to a pure
/// state keeps it pure, so the channel output is sum_k |phi_k><phi_k|.
std::vector<Vector> attenuation_branches(const FockBasis& basis, const Vector& amplitudes,
                                         int mode, double transmittance);

}  // namespace pqmt
