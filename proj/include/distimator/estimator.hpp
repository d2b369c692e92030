#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "distimator/experiment.hpp"

namespace distimator {

/// One-sided Hoeffding tail for the mean of n independent variables bounded
/// in [lo, hi]: exp(-2 n t^2 / (hi - lo)^2).
double hoeffding_tail(std::int64_t n, double t, double lo, double hi);

enum class Orientation { Increasing, Decreasing };

struct BisectionResult {
    double root = 0.0;
    bool clamped = false;  // target outside the reachable range; root is the nearest endpoint
    int iterations = 0;
};

/// Bisection inversion of a continuous monotone function on [a0, b0] with
/// tolerance eps_bis = eps^3 and the iteration cap
/// ceil(log2((b0-a0)/eps_bis)). eps is the statistical error bound of the
/// surrounding estimation, not the search tolerance itself.
BisectionResult bisection_search(const std::function<double(double)>& f, double a0,
                                 double b0, double target, double eps,
                                 Orientation orientation);

/// Estimation output for both the Werner and the Bell-diagonal modes.
/// Per-channel vectors have one entry in Werner mode and three in Bell mode.
struct EstimateReport {
    std::optional<double> w_hat;
    std::optional<std::array<double, 4>> q_hat;
    std::optional<std::array<double, 3>> x_hat;
    std::vector<double> eps_left;
    std::vector<double> eps_right;
    double delta = 1.0;      // failure-probability bound, clamped to [0,1]
    double delta_raw = 1.0;  // pre-clamp value (the Werner sum can reach 2)
    std::vector<bool> clamped;
    double consumed = 0.0;  // states consumed, sum_i (2 - p_hat_i) N_i
    bool q_valid = true;    // false when q_hat kept unprojected negative entries

    std::string to_key_value() const;
    std::string to_json_string(int indent = -1) const;
};

struct WernerBracket {
    double lo = 0.0;
    double hi = 2.0 / 3.0;
};

/// Closed-form noiseless Werner estimation from the empirical statistic:
/// w_hat = 1 - sqrt(4 p_hat - 1) with eps_R = (eps^2 + 2 eps (1-w_hat))/4,
/// eps_L = (-eps^2 + 2 eps (1-w_hat))/4 and the two-sided Hoeffding bound.
EstimateReport estimate_werner_noiseless(double p_hat, std::int64_t n, double eps_w,
                                         WernerBracket bracket = {});

/// Closed-form Werner estimation under control-copy depolarization with mean
/// survival s_avg: w_hat = 1 - sqrt(1 - (S + 1 - 4 p_hat)/S), deviation
/// thresholds scaled by S.
EstimateReport estimate_werner_depolarized(double p_hat, double s_avg, std::int64_t n,
                                           double eps_w, WernerBracket bracket = {});

/// Werner estimation from a protocol-A experiment log: bisection inversion
/// of the averaged expected statistic D1 (monotonically decreasing in w)
/// with back-propagated deviation thresholds
/// eps_L = p_hat - D1(w_hat + eps_w), eps_R = D1(w_hat - eps_w) - p_hat.
EstimateReport estimate_werner(const ExperimentLog& log, double eps_w,
                               WernerBracket bracket = {});

/// Same inversion fed with an explicit statistic value instead of the
/// log's n/N (used for exact-statistics roundtrips).
EstimateReport estimate_werner_from_stat(const StatisticModel& stat, double p_hat,
                                         std::int64_t n, double eps_w,
                                         WernerBracket bracket = {});

/// Closed-form noiseless Bell-diagonal estimation from three empirical
/// statistics: x_hat_i = (1 + sqrt(4 p_hat_i - 1))/2 clamped to [1/2,1],
/// q_hat via x_to_q, combined failure bound
/// delta = 1 - prod_i (1 - sum_m exp(-2 N_i eps_m_i^2)).
EstimateReport estimate_bell_noiseless(const std::array<double, 3>& p_hats,
                                       const std::array<std::int64_t, 3>& ns,
                                       const std::array<double, 3>& eps);

/// Bell-diagonal estimation from protocol-A, -B, -C logs: three independent
/// bisection inversions of D_i over x_i in [1/2, 1] (gauge q1 > 1/2), then
/// q_hat via x_to_q and the combined Hoeffding bound.
EstimateReport estimate_bell(const ExperimentLog& log_a, const ExperimentLog& log_b,
                             const ExperimentLog& log_c, const std::array<double, 3>& eps);

EstimateReport estimate_bell_from_stats(const std::array<const StatisticModel*, 3>& stats,
                                        const std::array<double, 3>& p_hats,
                                        const std::array<std::int64_t, 3>& ns,
                                        const std::array<double, 3>& eps);

/// Linear inverse of x_i = q1 + q_{i+1} under sum(q) = 1. Entries can come
/// out slightly negative when the x_i were clamped independently; callers
/// decide whether to project.
std::array<double, 4> x_to_q(const std::array<double, 3>& x);

/// Trace-distance bound for estimating an arbitrary state (off-diagonals
/// unknown): eps* = eps_T + sum_k sqrt(q_k^2 (1 - q_k^2)).
double arbitrary_state_bound(const BellVector& q, double eps_T);

/// Worst-case pairs needed for |w_hat - w| <= eps_w with failure bound
/// delta: ceil(8 ln(2/delta) / (eps_w^2 (2/3 - eps_w)^2)).
std::int64_t werner_sample_bound(double delta, double eps_w);

/// Worst-case per-protocol pairs for trace distance <= eps_T with failure
/// bound delta, given the largest intermediate estimate x_max:
/// ceil(ln(8/delta) / (2 (-(eps_T/3)^2 + (eps_T/3)(2 x_max - 1))^2)).
std::int64_t bell_sample_bound(double delta, double eps_T, double x_max);

/// Tomographic baseline for the Werner parameter: both-"up" probability
/// (2-w)/4, failure bound 2 exp(-N eps_w^2 / 8), and its inverse sample
/// query ceil(8 ln(2/delta) / eps_w^2).
double tomography_werner_up_prob(double w);
double tomography_werner_delta(std::int64_t n, double eps_w);
std::int64_t tomography_werner_samples(double delta, double eps_w);

/// Tomographic baseline for Bell-diagonal states: both-"up" probabilities
/// (x1/2, x2/2, (1-x3)/2) and the combined failure bound
/// 1 - prod_i (1 - 2 exp(-2 N_i (eps_i/2)^2)).
std::array<double, 3> tomography_bell_up_probs(const BellVector& q);
double tomography_bell_delta(const std::array<std::int64_t, 3>& ns,
                             const std::array<double, 3>& eps);

/// Expected states consumed by n rounds with success probability p:
/// (2 - p) n, leaving p n distilled survivors.
double consumed_pairs(double p, std::int64_t n);
double consumed_pairs(const std::vector<const ExperimentLog*>& logs);
double surviving_pairs(double p, std::int64_t n);

/// Smallest round counts achieving a target failure bound; monotone solves
/// of the closed-form deltas used by the resource sweeps.
std::int64_t werner_required_rounds(double w, double eps_w, double delta_target);
std::int64_t werner_required_rounds_depolarized(double w, double eps_w,
                                                double delta_target, double s_avg);
std::int64_t bell_required_rounds(const std::array<double, 3>& x,
                                  const std::array<double, 3>& eps, double delta_target);
std::int64_t tomography_bell_required_rounds(const std::array<double, 3>& eps,
                                             double delta_target);

}  // namespace distimator
