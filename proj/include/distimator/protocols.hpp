#pragma once

#include "distimator/bellvec.hpp"

namespace distimator {

/// The three two-way distillation protocols: A keeps the control copy after
/// a Z measurement of the target copy, B keeps the target copy after an X
/// measurement of the control copy, C is A preceded by noisy local +-pi/2
/// X rotations on both copies.
enum class ProtocolId { A, B, C };

char protocol_tag(ProtocolId p);           // 'a' / 'b' / 'c'
ProtocolId protocol_from_tag(char tag);    // throws on unknown tag

/// x_i for protocol i: q1+q2 (A), q1+q3 (B), q1+q4 (C).
double protocol_x(ProtocolId protocol, const BellVector& q);

/// One-parameter Bell-vector family with protocol_x == x used by the
/// estimators: [x,0,1-x,0] for A and [x,1-x,0,0] for B and C.
BellVector x_family_vector(ProtocolId protocol, double x);

/// Closed-form noiseless success probability (both-"up" outcome, half the
/// coincidence probability): ((q1+q2)^2+(q3+q4)^2)/2 for A and the analogous
/// pairings for B and C. Equals x^2 - x + 1/2 in the protocol's x variable.
double noiseless_success(ProtocolId protocol, const BellVector& q);

/// Success probability of one noisy protocol round with the control copy
/// stored for delay dt. Composes memory noise on the control copy (the
/// target copy is measured immediately), the protocol operations, and the
/// noisy coincidence measurement.
double noisy_success(ProtocolId protocol, const BellVector& q, const NoiseModel& model,
                     double dt);

/// Success probability and conditional state of the kept pair for one noisy
/// round, both-"up" outcome.
ConditionalState noisy_round(ProtocolId protocol, const BellVector& q,
                             const NoiseModel& model, double dt);

/// p(x) = slope*(x^2 - x) + offset: the noisy success probability restricted
/// to the protocol's one-parameter family is exactly quadratic, so the two
/// coefficients are recovered from evaluations at x = 1/2 and x = 1.
struct SuccessQuadratic {
    double slope = 1.0;
    double offset = 0.5;

    double eval_x(double x) const { return slope * (x * x - x) + offset; }
    double eval_werner(double w) const { return eval_x(1.0 - 0.5 * w); }
};

SuccessQuadratic quadratic_coefficients(ProtocolId protocol, const NoiseModel& model,
                                        double dt);

/// Fidelity of the kept copy after a successful noiseless protocol-A round:
/// (q1^2 + q2^2) / (2 p^(1)), valid in the distillable regime q1 > 1/2.
double distilled_fidelity_noiseless(const BellVector& q);

}  // namespace distimator
