#include "distimator/protocols.hpp"

#include <stdexcept>

namespace distimator {

char protocol_tag(ProtocolId p) {
    switch (p) {
        case ProtocolId::A: return 'a';
        case ProtocolId::B: return 'b';
        case ProtocolId::C: return 'c';
    }
    throw std::logic_error("unknown protocol");
}

ProtocolId protocol_from_tag(char tag) {
    switch (tag) {
        case 'a': case 'A': return ProtocolId::A;
        case 'b': case 'B': return ProtocolId::B;
        case 'c': case 'C': return ProtocolId::C;
    }
    throw std::domain_error(std::string("unknown protocol tag '") + tag + "'");
}

double protocol_x(ProtocolId protocol, const BellVector& q) {
    switch (protocol) {
        case ProtocolId::A: return q.x(1);
        case ProtocolId::B: return q.x(2);
        case ProtocolId::C: return q.x(3);
    }
    throw std::logic_error("unknown protocol");
}

BellVector x_family_vector(ProtocolId protocol, double x) {
    if (!(x >= 0.5 && x <= 1.0)) {
        throw std::domain_error("x must lie in [1/2, 1]");
    }
    if (protocol == ProtocolId::A) return BellVector(x, 0.0, 1.0 - x, 0.0);
    return BellVector(x, 1.0 - x, 0.0, 0.0);
}

double noiseless_success(ProtocolId protocol, const BellVector& q) {
    const double x = protocol_x(protocol, q);
    const double y = 1.0 - x;
    return 0.5 * (x * x + y * y);
}

namespace {

// Shared pipeline: memory noise on the stored control copy, protocol-C
// rotations on both copies, noisy CNOT, coincidence measurement.
JointBellVector joint_after_gates(ProtocolId protocol, const BellVector& q,
                                  const NoiseModel& model, double dt) {
    BellVector control = apply_memory_noise(q, model, dt);
    BellVector target = q;
    if (model.alice.lambda > 0.0 || model.bob.lambda > 0.0) {
        control = depolarize(control, Party::Bob, model.bob.lambda);
        control = depolarize(control, Party::Alice, model.alice.lambda);
    }
    if (model.alice.zeta > 0.0 || model.bob.zeta > 0.0) {
        control = dephase(control, Party::Bob, model.bob.zeta);
        control = dephase(control, Party::Alice, model.alice.zeta);
    }
    if (protocol == ProtocolId::C) {
        control = rotate_bilateral_rx(control, model.alice.m, model.bob.m);
        target = rotate_bilateral_rx(target, model.alice.m, model.bob.m);
    }
    return bilateral_cnot(control, target, model.alice.y, model.bob.y);
}

}  // namespace

double noisy_success(ProtocolId protocol, const BellVector& q, const NoiseModel& model,
                     double dt) {
    const JointBellVector f = joint_after_gates(protocol, q, model, dt);
    if (protocol == ProtocolId::B) {
        return x_coincidence_up_prob(f, model.alice.eta_x, model.bob.eta_x);
    }
    return z_coincidence_up_prob(f, model.alice.eta_z, model.bob.eta_z);
}

ConditionalState noisy_round(ProtocolId protocol, const BellVector& q,
                             const NoiseModel& model, double dt) {
    const JointBellVector f = joint_after_gates(protocol, q, model, dt);
    if (protocol == ProtocolId::B) {
        return conditional_control_state(f, MeasBasis::X, model.alice.eta_x,
                                         model.bob.eta_x);
    }
    return conditional_control_state(f, MeasBasis::Z, model.alice.eta_z, model.bob.eta_z);
}

SuccessQuadratic quadratic_coefficients(ProtocolId protocol, const NoiseModel& model,
                                        double dt) {
    model.validate();
    // p restricted to the x family is exactly quadratic of the form
    // slope*(x^2-x) + offset, so two evaluations pin both coefficients:
    // offset = p(1) and slope = 4*(p(1) - p(1/2)).
    const double p_half = noisy_success(protocol, x_family_vector(protocol, 0.5), model, dt);
    const double p_one = noisy_success(protocol, x_family_vector(protocol, 1.0), model, dt);
    return {4.0 * (p_one - p_half), p_one};
}

double distilled_fidelity_noiseless(const BellVector& q) {
    if (!(q[0] > 0.5)) {
        throw std::domain_error("distillable regime requires q1 > 1/2");
    }
    const double p1 = noiseless_success(ProtocolId::A, q);
    return (q[0] * q[0] + q[1] * q[1]) / (2.0 * p1);
}

}  // namespace distimator
