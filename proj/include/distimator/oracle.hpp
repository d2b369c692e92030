#pragma once

#include <complex>
#include <Eigen/Dense>

#include "distimator/bellvec.hpp"
#include "distimator/protocols.hpp"

namespace distimator::oracle {

// Dense density-matrix reference path. Qubit order within a pair is
// (Alice, Bob), most significant bit first; the two-pair space is ordered
// (A1, B1, A2, B2) so that kron(control, target) matches the
// JointBellVector index 4*(k-1)+j.

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Hermitian trace-one matrix of dimension 4 (one pair) or 16 (two pairs).
struct DensityMatrix {
    Matrix mat;

    explicit DensityMatrix(Matrix m);

    int dim() const { return static_cast<int>(mat.rows()); }

    /// Hermiticity and unit trace within 1e-12 (checked at construction).
    void validate() const;
    /// Smallest eigenvalue; PSD checks live in tests, not the hot path.
    double min_eigenvalue() const;
};

/// |B_k> in the computational basis, k in 1..4.
Vector bell_state(int k);

DensityMatrix bell_vector_to_density(const BellVector& q);

/// q_k = <B_k| rho |B_k>; off-diagonal content is discarded.
BellVector bell_diagonal_part(const DensityMatrix& rho);

/// Raw Bell-basis diagonal without BellVector validation (for states whose
/// diagonal is being inspected mid-computation).
std::array<double, 4> bell_diagonal_weights(const Matrix& rho4);
std::array<double, 16> joint_bell_diagonal_weights(const Matrix& rho16);

/// Channels on an n-qubit register (dim 4 or 16), qubit indexed from the
/// most significant bit. Depolarization is the convex mixture with the
/// replaced-marginal form (1-lambda) rho + lambda Tr_q(rho) (x) I/2.
Matrix depolarize_qubit(const Matrix& rho, int qubit, double lambda);
Matrix dephase_qubit(const Matrix& rho, int qubit, double zeta);

Matrix apply_memory_noise_dense(const Matrix& rho4, const NoiseModel& model, double dt);

/// Noisy Rx(-pi/2) (x) Rx(+pi/2) on one pair (Alice applies -pi/2).
Matrix rotate_bilateral_rx_dense(const Matrix& rho4, double m_alice, double m_bob);

/// Noisy CNOT_{A1->A2} (x) CNOT_{B1->B2} on kron(rho_ctrl, rho_tgt).
Matrix bilateral_cnot_dense(const Matrix& rho_ctrl, const Matrix& rho_tgt,
                            double y_alice, double y_bob);

Matrix povm_z_up(double eta_alice, double eta_bob);  // on the target pair, 16x16
Matrix povm_x_up(double eta_alice, double eta_bob);  // on the control pair, 16x16

struct DenseProtocolResult {
    double success = 0.0;
    DensityMatrix conditional;  // unmeasured pair, dim 4
};

/// Full dense protocol round: memory noise on the control copy, protocol-C
/// rotations when applicable, noisy CNOT, POVM. Returns the both-"up"
/// probability and the renormalized kept-pair state.
DenseProtocolResult run_protocol_dense(ProtocolId protocol, const DensityMatrix& rho_ctrl,
                                       const DensityMatrix& rho_tgt,
                                       const NoiseModel& model, double dt);

}  // namespace distimator::oracle
