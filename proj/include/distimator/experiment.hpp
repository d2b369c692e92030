#pragma once

#include <cstdint>
#include <vector>

#include "distimator/bellvec.hpp"
#include "distimator/protocols.hpp"

namespace distimator {

/// Counter-based per-round random stream. The state is a hash of
/// (master seed, protocol tag, round index), so draws depend only on that
/// tuple and never on how rounds are partitioned across workers.
class RoundRng {
  public:
    RoundRng(std::uint64_t master_seed, ProtocolId protocol, std::uint64_t round_index);

    std::uint64_t next_u64();
    double next_unit_oc();  // uniform in (0, 1], safe under log()
    double next_unit_co();  // uniform in [0, 1)

  private:
    std::uint64_t state_;
};

/// Geometric draw on {1, 2, ...} with success probability p_g (number of
/// attempts up to and including the first success).
std::int64_t sample_geometric(double p_g, RoundRng& rng);

/// Dimensionless generation delay of one round: t_geom(p_g) / delay_scale.
/// Reconstructs the exact draw run_experiment makes for that round.
double sample_generation_delay(double p_g, double delay_scale, std::uint64_t master_seed,
                               ProtocolId protocol, std::uint64_t round_index);

struct ExperimentConfig {
    ProtocolId protocol = ProtocolId::A;
    std::int64_t n_rounds = 1;
    double p_g = 0.2;           // per-attempt generation success probability
    double delay_scale = 100.0; // divisor applied to the geometric draw
    NoiseModel model;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ExperimentLog {
    ProtocolId protocol = ProtocolId::A;
    std::int64_t n_rounds = 0;
    std::int64_t n_success = 0;
    std::vector<double> delays;  // one dimensionless delay per round
    NoiseModel model;

    double p_hat() const;
    void validate() const;
};

/// Runs n_rounds protocol instances against the true state: per round, draw
/// the generation delay, evaluate the noisy success probability, draw the
/// Bernoulli outcome. Deterministic in (q_true, cfg).
ExperimentLog run_experiment(const BellVector& q_true, const ExperimentConfig& cfg);

enum class CandidateKind { WernerW, IntermediateX };

/// Averaged expected statistic D(candidate): the mean over the logged delays
/// of the per-round success probability with both copies prepared from the
/// candidate parameter (werner_vector in Werner mode, x_family_vector in
/// Bell mode).
double expected_statistic(const ExperimentLog& log, double candidate, CandidateKind kind);

/// D reduced to its exact quadratic form with per-log averaged coefficients,
/// so each evaluation is O(1) instead of O(n_rounds). eval_x/eval_werner
/// evaluate the quadratic continuation and accept arguments slightly outside
/// the physical range, which the estimators need when back-propagating
/// x_hat +- eps at the edges.
class StatisticModel {
  public:
    explicit StatisticModel(const ExperimentLog& log);

    double eval_x(double x) const { return quad_.eval_x(x); }
    double eval_werner(double w) const { return quad_.eval_werner(w); }
    const SuccessQuadratic& quadratic() const { return quad_; }

    /// Mean depolarization survival of the stored pair over the logged
    /// delays, S = (1/N) sum_j (1-lambda_A,j)(1-lambda_B,j); feeds the
    /// closed-form depolarized Werner estimator.
    double mean_pair_survival() const { return mean_survival_; }

  private:
    SuccessQuadratic quad_;
    double mean_survival_ = 1.0;
};

}  // namespace distimator
