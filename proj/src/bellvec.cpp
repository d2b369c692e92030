#include "distimator/bellvec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace distimator {

namespace {

void check_probability(double v, const char* name, double lo, double hi) {
    if (!(v >= lo && v <= hi)) {
        throw std::domain_error(std::string(name) + " = " + std::to_string(v) +
                                " outside [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
    }
}

template <std::size_t N>
std::array<double, N> normalize_weights(std::array<double, N> w, const char* what) {
    double sum = 0.0;
    for (double& v : w) {
        if (std::isnan(v) || v < -kNegativeTol || v > 1.0 + kNegativeTol) {
            throw std::domain_error(std::string(what) + " entry " + std::to_string(v) +
                                    " is not a probability weight");
        }
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTol) {
        throw std::domain_error(std::string(what) + " weights sum to " +
                                std::to_string(sum) + ", expected 1");
    }
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace

BellVector::BellVector(double q1, double q2, double q3, double q4)
    : BellVector(std::array<double, 4>{q1, q2, q3, q4}) {}

BellVector::BellVector(const std::array<double, 4>& q)
    : q_(normalize_weights(q, "BellVector")) {}

double BellVector::x(int i) const {
    if (i < 1 || i > 3) throw std::domain_error("x index must be 1, 2 or 3");
    return q_[0] + q_[static_cast<std::size_t>(i)];
}

JointBellVector::JointBellVector(const std::array<double, 16>& f)
    : f_(normalize_weights(f, "JointBellVector")) {}

void PartyNoise::validate() const {
    check_probability(lambda, "lambda", 0.0, 1.0);
    check_probability(zeta, "zeta", 0.0, 0.5);
    check_probability(m, "m", 0.0, 1.0);
    check_probability(y, "y", 0.0, 1.0);
    if (!(eta_z > 0.5 && eta_z <= 1.0)) {
        throw std::domain_error("eta_z must lie in (1/2, 1]");
    }
    if (!(eta_x > 0.5 && eta_x <= 1.0)) {
        throw std::domain_error("eta_x must lie in (1/2, 1]");
    }
}

void NoiseModel::validate() const {
    alice.validate();
    bob.validate();
    for (double t : {t_dpo_a, t_dpo_b, t_dph_a, t_dph_b}) {
        if (!(t > 0.0)) {
            throw std::domain_error("characteristic times must be strictly positive");
        }
    }
}

namespace {
double decay_lambda(double dt, double t_char) {
    // dt/inf == 0 keeps infinite characteristic times noise-free
    return -std::expm1(-dt / t_char);
}
}  // namespace

double NoiseModel::lambda_a(double dt) const { return decay_lambda(dt, t_dpo_a); }
double NoiseModel::lambda_b(double dt) const { return decay_lambda(dt, t_dpo_b); }
double NoiseModel::zeta_a(double dt) const { return 0.5 * decay_lambda(dt, t_dph_a); }
double NoiseModel::zeta_b(double dt) const { return 0.5 * decay_lambda(dt, t_dph_b); }

NoiseModel NoiseModel::noiseless() {
    NoiseModel m;
    constexpr double inf = std::numeric_limits<double>::infinity();
    m.t_dpo_a = m.t_dpo_b = m.t_dph_a = m.t_dph_b = inf;
    return m;
}

BellVector werner_vector(double w) {
    check_probability(w, "werner parameter w", 0.0, 1.0);
    return BellVector(1.0 - 0.75 * w, 0.25 * w, 0.25 * w, 0.25 * w);
}

BellVector depolarize(const BellVector& q, Party /*side*/, double lambda) {
    check_probability(lambda, "lambda", 0.0, 1.0);
    const double u = 0.25 * lambda;
    return BellVector(u + (1.0 - lambda) * q[0], u + (1.0 - lambda) * q[1],
                      u + (1.0 - lambda) * q[2], u + (1.0 - lambda) * q[3]);
}

BellVector dephase(const BellVector& q, Party /*side*/, double zeta) {
    check_probability(zeta, "zeta", 0.0, 0.5);
    return BellVector((1.0 - zeta) * q[0] + zeta * q[1], (1.0 - zeta) * q[1] + zeta * q[0],
                      (1.0 - zeta) * q[2] + zeta * q[3], (1.0 - zeta) * q[3] + zeta * q[2]);
}

BellVector apply_memory_noise(const BellVector& q, const NoiseModel& model, double dt) {
    if (!(dt >= 0.0)) throw std::domain_error("delay must be nonnegative");
    BellVector out = depolarize(q, Party::Bob, model.lambda_b(dt));
    out = dephase(out, Party::Bob, model.zeta_b(dt));
    out = depolarize(out, Party::Alice, model.lambda_a(dt));
    out = dephase(out, Party::Alice, model.zeta_a(dt));
    return out;
}

BellVector rotate_bilateral_rx(const BellVector& q, double m_alice, double m_bob) {
    check_probability(m_alice, "m_alice", 0.0, 1.0);
    check_probability(m_bob, "m_bob", 0.0, 1.0);
    const double keep = (1.0 - m_alice) * (1.0 - m_bob);
    const double mix = 0.25 * (m_alice + m_bob - m_alice * m_bob);
    return BellVector(keep * q[0] + mix, keep * q[3] + mix, keep * q[2] + mix,
                      keep * q[1] + mix);
}

JointBellVector bilateral_cnot(const BellVector& ctrl, const BellVector& tgt,
                               double y_alice, double y_bob) {
    check_probability(y_alice, "y_alice", 0.0, 1.0);
    check_probability(y_bob, "y_bob", 0.0, 1.0);
    const double q1 = ctrl[0], q2 = ctrl[1], q3 = ctrl[2], q4 = ctrl[3];
    const double t1 = tgt[0], t2 = tgt[1], t3 = tgt[2], t4 = tgt[3];
    const std::array<double, 16> c = {
        q1 * t1, q2 * t2, q1 * t3, q2 * t4,  // control stays Phi+
        q2 * t1, q1 * t2, q2 * t3, q1 * t4,  // Phi-
        q3 * t3, q4 * t4, q3 * t1, q4 * t2,  // Psi+
        q4 * t3, q3 * t4, q4 * t1, q3 * t2,  // Psi-
    };
    const double keep = (1.0 - y_alice) * (1.0 - y_bob);
    const double mix = (y_alice + y_bob - y_alice * y_bob) / 16.0;
    std::array<double, 16> f;
    for (std::size_t i = 0; i < 16; ++i) f[i] = keep * c[i] + mix;
    return JointBellVector(f);
}

namespace {

void check_eta(double eta, const char* name) {
    if (!(eta > 0.5 && eta <= 1.0)) {
        throw std::domain_error(std::string(name) + " must lie in (1/2, 1]");
    }
}

// <B|M_up|B> for the measured pair: alpha on the correlated Bell states,
// beta on the anticorrelated ones.
struct UpWeights {
    double alpha;
    double beta;
};

UpWeights up_weights(double eta_a, double eta_b) {
    return {0.5 * (1.0 - eta_a - eta_b + 2.0 * eta_a * eta_b),
            0.5 * (eta_a + eta_b - 2.0 * eta_a * eta_b)};
}

}  // namespace

double z_coincidence_up_prob(const JointBellVector& f, double eta_alice, double eta_bob) {
    check_eta(eta_alice, "eta_alice");
    check_eta(eta_bob, "eta_bob");
    const auto [alpha, beta] = up_weights(eta_alice, eta_bob);
    double phi = 0.0, psi = 0.0;  // target pair in {Phi+,Phi-} vs {Psi+,Psi-}
    for (std::size_t k = 0; k < 4; ++k) {
        phi += f[4 * k] + f[4 * k + 1];
        psi += f[4 * k + 2] + f[4 * k + 3];
    }
    return alpha * phi + beta * psi;
}

double x_coincidence_up_prob(const JointBellVector& f, double eta_alice, double eta_bob) {
    check_eta(eta_alice, "eta_alice");
    check_eta(eta_bob, "eta_bob");
    const auto [alpha, beta] = up_weights(eta_alice, eta_bob);
    double plus = 0.0, minus = 0.0;  // control pair in {Phi+,Psi+} vs {Phi-,Psi-}
    for (std::size_t j = 0; j < 4; ++j) {
        plus += f[j] + f[8 + j];
        minus += f[4 + j] + f[12 + j];
    }
    return alpha * plus + beta * minus;
}

ConditionalState conditional_control_state(const JointBellVector& f, MeasBasis basis,
                                           double eta_alice, double eta_bob) {
    check_eta(eta_alice, "eta_alice");
    check_eta(eta_bob, "eta_bob");
    const auto [alpha, beta] = up_weights(eta_alice, eta_bob);
    std::array<double, 4> w{};
    if (basis == MeasBasis::Z) {
        // target pair measured, control pair kept
        for (std::size_t k = 0; k < 4; ++k) {
            w[k] = alpha * (f[4 * k] + f[4 * k + 1]) + beta * (f[4 * k + 2] + f[4 * k + 3]);
        }
    } else {
        // control pair measured, target pair kept
        for (std::size_t j = 0; j < 4; ++j) {
            w[j] = alpha * (f[j] + f[8 + j]) + beta * (f[4 + j] + f[12 + j]);
        }
    }
    const double p = w[0] + w[1] + w[2] + w[3];
    if (!(p > 0.0)) {
        throw std::domain_error("coincidence probability vanishes; conditional state undefined");
    }
    return {BellVector(w[0] / p, w[1] / p, w[2] / p, w[3] / p), p};
}

double trace_distance(const BellVector& a, const BellVector& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < 4; ++k) d += std::abs(a[k] - b[k]);
    return 0.5 * d;
}

}  // namespace distimator
