#pragma once

#include <array>
#include <cstddef>
#include <limits>

namespace distimator {

// Bell-basis ordering used everywhere: Phi+, Phi-, Psi+, Psi- (Pauli
// transforms I, Z, X, ZX of Phi+).
inline constexpr int kBellDim = 4;
inline constexpr int kJointBellDim = 16;

// Entry/sum tolerances for probability-vector validation. Entries in
// [-kNegativeTol, 0) are clamped to zero and the vector renormalized;
// anything more negative is treated as a bug and rejected.
inline constexpr double kNegativeTol = 1e-12;
inline constexpr double kSumTol = 1e-12;

enum class Party { Alice, Bob };

/// Diagonal of a two-qubit state in the Bell basis: four nonnegative
/// weights summing to one.
class BellVector {
  public:
    BellVector(double q1, double q2, double q3, double q4);
    explicit BellVector(const std::array<double, 4>& q);

    double operator[](std::size_t k) const { return q_[k]; }
    const std::array<double, 4>& weights() const { return q_; }

    /// Intermediate variable x_i = q1 + q_{i+1}, i in {1,2,3}.
    double x(int i) const;

    static BellVector phi_plus() { return BellVector(1.0, 0.0, 0.0, 0.0); }

  private:
    std::array<double, 4> q_;
};

/// Bell-basis diagonal of a control(x)target two-pair state. Entry
/// 4*(k-1)+j holds the weight of |B_k> on the control pair and |B_j> on
/// the target pair (1-based k, j).
class JointBellVector {
  public:
    explicit JointBellVector(const std::array<double, 16>& f);

    double operator[](std::size_t k) const { return f_[k]; }
    const std::array<double, 16>& weights() const { return f_; }

  private:
    std::array<double, 16> f_;
};

/// Device noise parameters for one party. lambda/zeta are preparation-stage
/// (time-independent) depolarizing/dephasing probabilities; the
/// time-dependent memory contribution comes from the characteristic times in
/// NoiseModel. Measurement non-error probabilities must stay strictly above
/// 1/2 so that the monotonicity coefficients of the success probabilities
/// keep a fixed sign.
struct PartyNoise {
    double lambda = 0.0;  // depolarizing, [0,1]
    double zeta = 0.0;    // dephasing, [0,1/2]
    double m = 0.0;       // rotation depolarizing, [0,1]
    double y = 0.0;       // CNOT depolarizing, [0,1]
    double eta_z = 1.0;   // Z-measurement non-error probability, (1/2,1]
    double eta_x = 1.0;   // X-measurement non-error probability, (1/2,1]

    void validate() const;
};

/// Full device/memory noise description for both parties. Characteristic
/// times share the unit of the generation delays fed to apply_memory_noise;
/// +infinity disables the corresponding memory channel.
struct NoiseModel {
    PartyNoise alice;
    PartyNoise bob;
    double t_dpo_a = 1.0;
    double t_dpo_b = 1.0;
    double t_dph_a = 1.0;
    double t_dph_b = 1.0;

    void validate() const;

    double lambda_a(double dt) const;  // 1 - exp(-dt/t_dpo_a)
    double lambda_b(double dt) const;
    double zeta_a(double dt) const;  // (1 - exp(-dt/t_dph_a)) / 2
    double zeta_b(double dt) const;

    static NoiseModel noiseless();
};

/// Werner state weights (1 - 3w/4, w/4, w/4, w/4).
BellVector werner_vector(double w);

/// Single-qubit depolarizing channel on one party's half; at the Bell level
/// the side does not matter, every weight relaxes toward 1/4.
BellVector depolarize(const BellVector& q, Party side, double lambda);

/// Single-qubit dephasing on one party's half. Mixes weight within the
/// {Phi+,Phi-} pair and within the {Psi+,Psi-} pair.
BellVector dephase(const BellVector& q, Party side, double zeta);

/// Storage noise accumulated over delay dt: depolarize then dephase on
/// Bob's half, then the same on Alice's, with time-dependent parameters
/// lambda(dt) = 1 - exp(-dt/T_dpo) and zeta(dt) = (1 - exp(-dt/T_dph))/2.
/// The static lambda/zeta entries of the model are NOT applied here.
BellVector apply_memory_noise(const BellVector& q, const NoiseModel& model, double dt);

/// Noisy local Rx(-pi/2) (x) Rx(+pi/2): swaps the Phi- and Psi- weights,
/// mixed with the maximally mixed state with weight mA + mB - mA*mB.
BellVector rotate_bilateral_rx(const BellVector& q, double m_alice, double m_bob);

/// Noisy bilateral CNOT (control pair -> target pair). The noiseless part
/// is the product permutation of Bell weights; depolarizing weight
/// yA + yB - yA*yB goes to the uniform 16-vector.
JointBellVector bilateral_cnot(const BellVector& ctrl, const BellVector& tgt,
                               double y_alice, double y_bob);

/// Probability of the both-"up" outcome for a noisy Z measurement of the
/// target pair.
double z_coincidence_up_prob(const JointBellVector& f, double eta_alice, double eta_bob);

/// Probability of the both-"up" outcome for a noisy X measurement of the
/// control pair.
double x_coincidence_up_prob(const JointBellVector& f, double eta_alice, double eta_bob);

enum class MeasBasis { Z, X };

struct ConditionalState {
    BellVector state;
    double probability;
};

/// Renormalized Bell vector of the unmeasured pair conditioned on the
/// both-"up" outcome, together with the outcome probability. Basis Z
/// measures the target pair (the control pair is kept); basis X measures
/// the control pair (the target pair is kept).
ConditionalState conditional_control_state(const JointBellVector& f, MeasBasis basis,
                                           double eta_alice, double eta_bob);

/// Trace distance between two Bell-diagonal states: half the l1 distance
/// of the weight vectors.
double trace_distance(const BellVector& a, const BellVector& b);

}  // namespace distimator
