// Orthogonal bead <-> normal-mode transform of the free ring polymer, the
// per-mode spring factors, and the harmonic mode frequencies.
//
// Convention: mode index n runs 1..P (stored 0-based, entry i holds n = i+1).
// Row n = P is the uniform centroid row, so x_P = sqrt(P) * q_centroid and the
// centroid mode has zero spring frequency. The remaining rows are the real
// Fourier basis of the cyclic spring matrix: cos rows for n < P/2, sin rows
// for n > P/2 (paired so that rows n and P-n share the degenerate frequency),
// and for even P the alternating-sign row at n = P/2. With this assignment the
// spring factor of every row n is f_n = 4 k_P sin^2(pi n / P) / m.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rpkubo/model.hpp"

namespace rpkubo {

struct NormalModeBasis {
    int n_beads = 1;
    // Row i maps beads -> mode n = i+1: x_n = sum_j U(i,j) q_j.
    Eigen::MatrixXd matrix;
    // f_n = 4 k_P sin^2(pi n / P) / m; the free-polymer mode angular frequency
    // is sqrt(f_n). Last entry (centroid) is exactly 0.
    std::vector<double> free_mode_factors;

    // omega_n = sqrt(omega^2 + f_n) for an external harmonic frequency omega.
    std::vector<double> mode_frequencies_with_harmonic(double omega) const;
};

NormalModeBasis build_basis(const SystemSpec& spec);

// Apply U (bead -> normal mode) to positions and momenta. Throws on
// representation mismatch.
RingPolymerState to_modes(const NormalModeBasis& basis, const RingPolymerState& state);

// Apply U^T (normal mode -> bead).
RingPolymerState from_modes(const NormalModeBasis& basis, const RingPolymerState& state);

}  // namespace rpkubo
