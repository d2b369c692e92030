#include "distimator/experiment.hpp"

#include <cmath>
#include <stdexcept>

namespace distimator {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RoundRng::RoundRng(std::uint64_t master_seed, ProtocolId protocol,
                   std::uint64_t round_index)
    : state_(mix64(mix64(mix64(master_seed + kGolden) ^
                         (static_cast<std::uint64_t>(protocol) + 1)) ^
                   round_index)) {}

std::uint64_t RoundRng::next_u64() { return mix64(state_ += kGolden); }

double RoundRng::next_unit_co() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RoundRng::next_unit_oc() { return 1.0 - next_unit_co(); }

std::int64_t sample_geometric(double p_g, RoundRng& rng) {
    if (!(p_g > 0.0 && p_g <= 1.0)) {
        throw std::domain_error("generation probability must lie in (0, 1]");
    }
    const double u = rng.next_unit_oc();
    if (p_g == 1.0) return 1;
    // inverse CDF over support {1, 2, ...}
    const double t = std::ceil(std::log(u) / std::log1p(-p_g));
    return t < 1.0 ? 1 : static_cast<std::int64_t>(t);
}

double sample_generation_delay(double p_g, double delay_scale, std::uint64_t master_seed,
                               ProtocolId protocol, std::uint64_t round_index) {
    if (!(delay_scale > 0.0)) throw std::domain_error("delay scale must be positive");
    RoundRng rng(master_seed, protocol, round_index);
    return static_cast<double>(sample_geometric(p_g, rng)) / delay_scale;
}

void ExperimentConfig::validate() const {
    if (n_rounds < 1) throw std::domain_error("n_rounds must be at least 1");
    if (!(p_g > 0.0 && p_g <= 1.0)) {
        throw std::domain_error("generation probability must lie in (0, 1]");
    }
    if (!(delay_scale > 0.0)) throw std::domain_error("delay scale must be positive");
    model.validate();
}

double ExperimentLog::p_hat() const {
    if (n_rounds < 1) throw std::domain_error("empty experiment log");
    return static_cast<double>(n_success) / static_cast<double>(n_rounds);
}

void ExperimentLog::validate() const {
    if (n_rounds < 1) throw std::domain_error("empty experiment log");
    if (n_success < 0 || n_success > n_rounds) {
        throw std::domain_error("success count outside [0, n_rounds]");
    }
    if (static_cast<std::int64_t>(delays.size()) != n_rounds) {
        throw std::domain_error("log must hold exactly one delay per round");
    }
    model.validate();
}

ExperimentLog run_experiment(const BellVector& q_true, const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentLog log;
    log.protocol = cfg.protocol;
    log.n_rounds = cfg.n_rounds;
    log.model = cfg.model;
    log.delays.resize(static_cast<std::size_t>(cfg.n_rounds));

    std::int64_t successes = 0;
    for (std::int64_t r = 0; r < cfg.n_rounds; ++r) {
        RoundRng rng(cfg.seed, cfg.protocol, static_cast<std::uint64_t>(r));
        const double dt =
            static_cast<double>(sample_geometric(cfg.p_g, rng)) / cfg.delay_scale;
        const double p = noisy_success(cfg.protocol, q_true, cfg.model, dt);
        if (rng.next_unit_co() < p) ++successes;
        log.delays[static_cast<std::size_t>(r)] = dt;
    }
    log.n_success = successes;
    return log;
}

double expected_statistic(const ExperimentLog& log, double candidate, CandidateKind kind) {
    log.validate();
    BellVector q = kind == CandidateKind::WernerW
                       ? werner_vector(candidate)
                       : x_family_vector(log.protocol, candidate);
    double sum = 0.0;
    for (double dt : log.delays) {
        sum += noisy_success(log.protocol, q, log.model, dt);
    }
    return sum / static_cast<double>(log.n_rounds);
}

StatisticModel::StatisticModel(const ExperimentLog& log) {
    log.validate();
    double slope_sum = 0.0;
    double offset_sum = 0.0;
    double survival_sum = 0.0;
    for (double dt : log.delays) {
        const SuccessQuadratic quad = quadratic_coefficients(log.protocol, log.model, dt);
        slope_sum += quad.slope;
        offset_sum += quad.offset;
        survival_sum += (1.0 - log.model.lambda_a(dt)) * (1.0 - log.model.lambda_b(dt)) *
                        (1.0 - log.model.alice.lambda) * (1.0 - log.model.bob.lambda);
    }
    const double n = static_cast<double>(log.n_rounds);
    quad_.slope = slope_sum / n;
    quad_.offset = offset_sum / n;
    mean_survival_ = survival_sum / n;
}

}  // namespace distimator
