#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "distimator/protocols.hpp"
#include "test_util.hpp"

using namespace distimator;
using distimator::testing::random_bell_vector;
using distimator::testing::random_noise_model;

TEST_CASE("noiseless success closed forms") {
    for (ProtocolId p : {ProtocolId::A, ProtocolId::B, ProtocolId::C}) {
        CHECK(noiseless_success(p, BellVector::phi_plus()) == doctest::Approx(0.5));
        CHECK(noiseless_success(p, BellVector(0.25, 0.25, 0.25, 0.25)) ==
              doctest::Approx(0.25));
    }
    CHECK(noiseless_success(ProtocolId::A, werner_vector(0.4)) ==
          doctest::Approx(0.34).epsilon(1e-14));

    const BellVector q(0.5, 0.2, 0.2, 0.1);
    CHECK(noiseless_success(ProtocolId::A, q) ==
          doctest::Approx(0.5 * (0.7 * 0.7 + 0.3 * 0.3)));
    CHECK(noiseless_success(ProtocolId::B, q) ==
          doctest::Approx(0.5 * (0.7 * 0.7 + 0.3 * 0.3)));
    CHECK(noiseless_success(ProtocolId::C, q) ==
          doctest::Approx(0.5 * (0.6 * 0.6 + 0.4 * 0.4)));
}

TEST_CASE("noiseless success depends on q only through x_i") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double x = 0.5 + 0.5 * unit(rng);
        // protocol A: split x across (q1,q2) and 1-x across (q3,q4) at random
        const double a = x * unit(rng), b = (1.0 - x) * unit(rng);
        const BellVector qa(a, x - a, b, 1.0 - x - b);
        CHECK(noiseless_success(ProtocolId::A, qa) ==
              doctest::Approx(x * x - x + 0.5).epsilon(1e-13));
        const BellVector qb(a, b, x - a, 1.0 - x - b);
        CHECK(noiseless_success(ProtocolId::B, qb) ==
              doctest::Approx(x * x - x + 0.5).epsilon(1e-13));
        const BellVector qc(a, b, 1.0 - x - b, x - a);
        CHECK(noiseless_success(ProtocolId::C, qc) ==
              doctest::Approx(x * x - x + 0.5).epsilon(1e-13));
    }
}

TEST_CASE("noisy success reduces to the closed form without noise") {
    const NoiseModel off = NoiseModel::noiseless();
    std::mt19937_64 rng(22);
    for (int i = 0; i < 100; ++i) {
        const BellVector q = random_bell_vector(rng);
        for (ProtocolId p : {ProtocolId::A, ProtocolId::B, ProtocolId::C}) {
            CHECK(std::abs(noisy_success(p, q, off, 0.0) - noiseless_success(p, q)) <
                  1e-13);
            CHECK(std::abs(noisy_success(p, q, off, 3.7) - noiseless_success(p, q)) <
                  1e-13);
        }
    }
}

TEST_CASE("control depolarization shifts the werner statistic") {
    // survival S = e^{-1/4} split evenly across both parties
    const double s = std::exp(-0.25);
    NoiseModel model = NoiseModel::noiseless();
    model.alice.lambda = 1.0 - std::exp(-0.125);
    model.bob.lambda = 1.0 - std::exp(-0.125);
    const double w = 0.4;
    const double expected = 0.25 * (s * w * w - 2.0 * s * w + s + 1.0);
    CHECK(noisy_success(ProtocolId::A, werner_vector(w), model, 0.0) ==
          doctest::Approx(expected).epsilon(1e-13));
    CHECK(expected == doctest::Approx(0.3200920704764264).epsilon(1e-14));

    // the same survival through characteristic times instead
    NoiseModel timed = NoiseModel::noiseless();
    timed.t_dpo_a = 1.0;
    timed.t_dpo_b = 1.0;
    CHECK(noisy_success(ProtocolId::A, werner_vector(w), timed, 0.125) ==
          doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("protocol C with ideal rotations is protocol A on the swapped state") {
    // holds when the storage noise commutes with the swap, i.e. without
    // dephasing (dephasing mixes {q1,q2} while the swap moves q4 into q2)
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        const BellVector q = random_bell_vector(rng);
        NoiseModel model = random_noise_model(rng);
        model.alice.m = 0.0;
        model.bob.m = 0.0;
        model.alice.zeta = 0.0;
        model.bob.zeta = 0.0;
        model.t_dph_a = std::numeric_limits<double>::infinity();
        model.t_dph_b = std::numeric_limits<double>::infinity();
        const BellVector swapped(q[0], q[3], q[2], q[1]);
        CHECK(std::abs(noisy_success(ProtocolId::C, q, model, 0.1) -
                       noisy_success(ProtocolId::A, swapped, model, 0.1)) < 1e-13);
    }
}

TEST_CASE("quadratic coefficients") {
    const SuccessQuadratic clean =
        quadratic_coefficients(ProtocolId::A, NoiseModel::noiseless(), 0.0);
    CHECK(clean.slope == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(clean.offset == doctest::Approx(0.5).epsilon(1e-13));

    for (double lam : {0.05, 0.2, 0.5}) {
        NoiseModel model = NoiseModel::noiseless();
        model.alice.lambda = lam;
        model.bob.lambda = lam;
        const SuccessQuadratic quad = quadratic_coefficients(ProtocolId::A, model, 0.0);
        CHECK(quad.slope == doctest::Approx((1.0 - lam) * (1.0 - lam)).epsilon(1e-12));
    }

    // complete dephasing on one side kills the X-basis signal
    NoiseModel dephased = NoiseModel::noiseless();
    dephased.alice.zeta = 0.5;
    CHECK(std::abs(quadratic_coefficients(ProtocolId::B, dephased, 0.0).slope) < 1e-14);
}

TEST_CASE("slope matches the composite-noise product form") {
    // f_i = prod_j (1-lambda_j)(1-y_j)(1-2 eta_j) with the dephasing factors
    // (1-2 zeta_j) joining for protocols B and C and the rotation factors
    // squared for protocol C (both copies are rotated).
    std::mt19937_64 rng(24);
    for (int i = 0; i < 200; ++i) {
        const NoiseModel model = random_noise_model(rng, 0.3);
        const double dt = 0.2 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const double dpo = (1.0 - model.lambda_a(dt)) * (1.0 - model.lambda_b(dt)) *
                           (1.0 - model.alice.lambda) * (1.0 - model.bob.lambda);
        const double dph = (1.0 - 2.0 * model.zeta_a(dt)) * (1.0 - 2.0 * model.zeta_b(dt)) *
                           (1.0 - 2.0 * model.alice.zeta) * (1.0 - 2.0 * model.bob.zeta);
        const double gates = (1.0 - model.alice.y) * (1.0 - model.bob.y);
        const double mz = (1.0 - 2.0 * model.alice.eta_z) * (1.0 - 2.0 * model.bob.eta_z);
        const double mx = (1.0 - 2.0 * model.alice.eta_x) * (1.0 - 2.0 * model.bob.eta_x);
        const double rot = (1.0 - model.alice.m) * (1.0 - model.bob.m);

        const double f1 = quadratic_coefficients(ProtocolId::A, model, dt).slope;
        CHECK(f1 == doctest::Approx(dpo * gates * mz).epsilon(1e-11));
        const double f2 = quadratic_coefficients(ProtocolId::B, model, dt).slope;
        CHECK(f2 == doctest::Approx(dpo * dph * gates * mx).epsilon(1e-11));
        const double f3 = quadratic_coefficients(ProtocolId::C, model, dt).slope;
        CHECK(f3 == doctest::Approx(dpo * dph * gates * mz * rot * rot).epsilon(1e-11));
    }
}

TEST_CASE("pipeline agrees with its quadratic form") {
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const NoiseModel model = random_noise_model(rng);
        const double dt = 0.3 * unit(rng);
        const double x = 0.5 + 0.5 * unit(rng);
        const auto protocol = static_cast<ProtocolId>(i % 3);
        const SuccessQuadratic quad = quadratic_coefficients(protocol, model, dt);
        const double direct =
            noisy_success(protocol, x_family_vector(protocol, x), model, dt);
        CHECK(std::abs(direct - quad.eval_x(x)) < 1e-12);
    }
}

TEST_CASE("success probability stays within [offset - slope/4, offset]") {
    std::mt19937_64 rng(26);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const NoiseModel model = random_noise_model(rng);
        const double dt = 0.3 * unit(rng);
        const auto protocol = static_cast<ProtocolId>(i % 3);
        const SuccessQuadratic quad = quadratic_coefficients(protocol, model, dt);
        CHECK(quad.offset <= 1.0 + 1e-12);
        CHECK(quad.offset - 0.25 * quad.slope >= -1e-12);
        const double p = noisy_success(protocol, random_bell_vector(rng), model, dt);
        CHECK(p >= -1e-12);
        CHECK(p <= 1.0 + 1e-12);
    }
}

TEST_CASE("success is strictly increasing in x for validated models") {
    std::mt19937_64 rng(27);
    for (int trial = 0; trial < 100; ++trial) {
        const NoiseModel model = random_noise_model(rng);
        const double dt = 0.1;
        for (ProtocolId p : {ProtocolId::A, ProtocolId::B, ProtocolId::C}) {
            const SuccessQuadratic quad = quadratic_coefficients(p, model, dt);
            REQUIRE(quad.slope > 0.0);
            double prev = noisy_success(p, x_family_vector(p, 0.5), model, dt);
            for (int i = 1; i <= 50; ++i) {
                const double x = 0.5 + 0.01 * i;
                const double cur = noisy_success(p, x_family_vector(p, x), model, dt);
                CHECK(cur - prev > 1e-14 * quad.slope);
                prev = cur;
            }
        }
    }
}

TEST_CASE("distilled fidelity") {
    CHECK(distilled_fidelity_noiseless(BellVector::phi_plus()) == doctest::Approx(1.0));
    CHECK(distilled_fidelity_noiseless(werner_vector(0.4)) ==
          doctest::Approx(0.5 / 0.68).epsilon(1e-14));
    CHECK(distilled_fidelity_noiseless(BellVector(0.85, 0.05, 0.05, 0.05)) ==
          doctest::Approx(0.725 / 0.82).epsilon(1e-14));
    CHECK_THROWS_AS(distilled_fidelity_noiseless(BellVector(0.5, 0.3, 0.1, 0.1)),
                    std::domain_error);
}

TEST_CASE("protocol tags") {
    CHECK(protocol_tag(ProtocolId::B) == 'b');
    CHECK(protocol_from_tag('C') == ProtocolId::C);
    CHECK_THROWS_AS(protocol_from_tag('x'), std::domain_error);
    CHECK(protocol_x(ProtocolId::C, BellVector(0.6, 0.1, 0.1, 0.2)) ==
          doctest::Approx(0.8));
    CHECK_THROWS_AS(x_family_vector(ProtocolId::A, 0.4), std::domain_error);
}
