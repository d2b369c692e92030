#pragma once

#include <array>
#include <random>

#include "distimator/bellvec.hpp"

namespace distimator::testing {

inline BellVector random_bell_vector(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::array<double, 4> q{};
    double sum = 0.0;
    for (double& v : q) {
        v = unit(rng) + 1e-6;
        sum += v;
    }
    for (double& v : q) v /= sum;
    return BellVector(q);
}

/// Random Bell vector with q1 > 1/2 (the gauge-fixed regime).
inline BellVector random_distillable_bell_vector(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double q1 = 0.5 + 0.5 * unit(rng);
    std::array<double, 3> rest{};
    double sum = 0.0;
    for (double& v : rest) {
        v = unit(rng) + 1e-9;
        sum += v;
    }
    return BellVector(q1, (1.0 - q1) * rest[0] / sum, (1.0 - q1) * rest[1] / sum,
                      (1.0 - q1) * rest[2] / sum);
}

/// Noise draws covering the devices the estimators are built for: moderate
/// gate/memory noise, measurement fidelity well above 1/2.
inline NoiseModel random_noise_model(std::mt19937_64& rng, double strength = 0.2) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto party = [&] {
        PartyNoise p;
        p.lambda = strength * unit(rng);
        p.zeta = 0.5 * strength * unit(rng);
        p.m = strength * unit(rng);
        p.y = strength * unit(rng);
        p.eta_z = 1.0 - 0.2 * unit(rng);
        p.eta_x = 1.0 - 0.2 * unit(rng);
        return p;
    };
    NoiseModel m;
    m.alice = party();
    m.bob = party();
    std::uniform_real_distribution<double> t(0.5, 4.0);
    m.t_dpo_a = t(rng);
    m.t_dpo_b = t(rng);
    m.t_dph_a = t(rng);
    m.t_dph_b = t(rng);
    return m;
}

}  // namespace distimator::testing
