#include "distimator/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace distimator::oracle {

namespace {

using Complex = std::complex<double>;

constexpr double kInvSqrt2 = 0.70710678118654752440;

int qubit_count(const Matrix& rho) {
    const auto d = rho.rows();
    int n = 0;
    while ((Eigen::Index{1} << n) < d) ++n;
    if ((Eigen::Index{1} << n) != d || n < 1) {
        throw std::domain_error("register dimension must be a power of two");
    }
    return n;
}

// Remove one qubit (indexed from the most significant bit) by partial trace.
Matrix trace_out_qubit(const Matrix& rho, int qubit) {
    const int n = qubit_count(rho);
    const int shift = n - 1 - qubit;
    const int dd = static_cast<int>(rho.rows()) / 2;
    const int low_mask = (1 << shift) - 1;
    Matrix out = Matrix::Zero(dd, dd);
    for (int i = 0; i < dd; ++i) {
        const int hi_i = (i >> shift) << (shift + 1);
        const int lo_i = i & low_mask;
        for (int j = 0; j < dd; ++j) {
            const int hi_j = (j >> shift) << (shift + 1);
            const int lo_j = j & low_mask;
            for (int b = 0; b < 2; ++b) {
                out(i, j) += rho(hi_i | (b << shift) | lo_i, hi_j | (b << shift) | lo_j);
            }
        }
    }
    return out;
}

// Insert a maximally mixed qubit at the given position.
Matrix embed_mixed_qubit(const Matrix& rho_small, int qubit, int n) {
    const int shift = n - 1 - qubit;
    const int d = 1 << n;
    const int low_mask = (1 << shift) - 1;
    Matrix out = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const int bi = (i >> shift) & 1;
        const int si = (((i >> (shift + 1)) << shift) | (i & low_mask));
        for (int j = 0; j < d; ++j) {
            if (bi != ((j >> shift) & 1)) continue;
            const int sj = (((j >> (shift + 1)) << shift) | (j & low_mask));
            out(i, j) = 0.5 * rho_small(si, sj);
        }
    }
    return out;
}

Matrix z_on_qubit(int qubit, int n) {
    const int d = 1 << n;
    const int shift = n - 1 - qubit;
    Matrix z = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        z(i, i) = ((i >> shift) & 1) ? -1.0 : 1.0;
    }
    return z;
}

Eigen::Matrix2cd rx_gate(double theta) {
    Eigen::Matrix2cd u;
    const double c = std::cos(0.5 * theta);
    const Complex ms(0.0, -std::sin(0.5 * theta));
    u << c, ms, ms, c;
    return u;
}

Eigen::Matrix2cd meas_up(double eta, bool x_basis) {
    Eigen::Matrix2cd m;
    if (x_basis) {
        // eta |+><+| + (1-eta) |-><-|
        const double off = eta - 0.5;
        m << 0.5, off, off, 0.5;
    } else {
        m << eta, 0.0, 0.0, 1.0 - eta;
    }
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

const Matrix& cnot16() {
    static const Matrix u = [] {
        Matrix m = Matrix::Zero(16, 16);
        for (int i = 0; i < 16; ++i) {
            const int a1 = (i >> 3) & 1, b1 = (i >> 2) & 1;
            const int a2 = (i >> 1) & 1, b2 = i & 1;
            const int j = (a1 << 3) | (b1 << 2) | ((a2 ^ a1) << 1) | (b2 ^ b1);
            m(j, i) = 1.0;
        }
        return m;
    }();
    return u;
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix m) : mat(std::move(m)) { validate(); }

void DensityMatrix::validate() const {
    if (mat.rows() != mat.cols() || (mat.rows() != 4 && mat.rows() != 16)) {
        throw std::domain_error("density matrices here are 4x4 or 16x16");
    }
    if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::domain_error("density matrix is not Hermitian");
    }
    if (std::abs(mat.trace() - Complex(1.0, 0.0)) > 1e-12) {
        throw std::domain_error("density matrix trace differs from 1");
    }
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(mat, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

Vector bell_state(int k) {
    Vector v = Vector::Zero(4);
    switch (k) {
        case 1: v(0) = kInvSqrt2; v(3) = kInvSqrt2; break;
        case 2: v(0) = kInvSqrt2; v(3) = -kInvSqrt2; break;
        case 3: v(1) = kInvSqrt2; v(2) = kInvSqrt2; break;
        case 4: v(1) = kInvSqrt2; v(2) = -kInvSqrt2; break;
        default: throw std::domain_error("bell index must be 1..4");
    }
    return v;
}

DensityMatrix bell_vector_to_density(const BellVector& q) {
    Matrix rho = Matrix::Zero(4, 4);
    for (int k = 1; k <= 4; ++k) {
        const Vector v = bell_state(k);
        rho += q[static_cast<std::size_t>(k - 1)] * (v * v.adjoint());
    }
    return DensityMatrix(rho);
}

std::array<double, 4> bell_diagonal_weights(const Matrix& rho4) {
    std::array<double, 4> q{};
    for (int k = 1; k <= 4; ++k) {
        const Vector v = bell_state(k);
        q[static_cast<std::size_t>(k - 1)] = (v.adjoint() * rho4 * v)(0, 0).real();
    }
    return q;
}

std::array<double, 16> joint_bell_diagonal_weights(const Matrix& rho16) {
    std::array<double, 16> f{};
    for (int k = 1; k <= 4; ++k) {
        for (int j = 1; j <= 4; ++j) {
            Vector v(16);
            const Vector bk = bell_state(k), bj = bell_state(j);
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) v(4 * a + b) = bk(a) * bj(b);
            }
            f[static_cast<std::size_t>(4 * (k - 1) + (j - 1))] =
                (v.adjoint() * rho16 * v)(0, 0).real();
        }
    }
    return f;
}

BellVector bell_diagonal_part(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw std::domain_error("expected a one-pair density matrix");
    const auto q = bell_diagonal_weights(rho.mat);
    return BellVector(q);
}

Matrix depolarize_qubit(const Matrix& rho, int qubit, double lambda) {
    const int n = qubit_count(rho);
    if (lambda == 0.0) return rho;
    return (1.0 - lambda) * rho +
           lambda * embed_mixed_qubit(trace_out_qubit(rho, qubit), qubit, n);
}

Matrix dephase_qubit(const Matrix& rho, int qubit, double zeta) {
    if (zeta == 0.0) return rho;
    const Matrix z = z_on_qubit(qubit, qubit_count(rho));
    return (1.0 - zeta) * rho + zeta * (z * rho * z);
}

Matrix apply_memory_noise_dense(const Matrix& rho4, const NoiseModel& model, double dt) {
    if (!(dt >= 0.0)) throw std::domain_error("delay must be nonnegative");
    Matrix rho = depolarize_qubit(rho4, 1, model.lambda_b(dt));
    rho = dephase_qubit(rho, 1, model.zeta_b(dt));
    rho = depolarize_qubit(rho, 0, model.lambda_a(dt));
    rho = dephase_qubit(rho, 0, model.zeta_a(dt));
    return rho;
}

Matrix rotate_bilateral_rx_dense(const Matrix& rho4, double m_alice, double m_bob) {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    const Eigen::Matrix2cd ua = rx_gate(-0.5 * M_PI);
    const Eigen::Matrix2cd ub = rx_gate(+0.5 * M_PI);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            u.block(2 * i, 2 * j, 2, 2) = ua(i, j) * ub;
        }
    }
    return (1.0 - m_alice) * (1.0 - m_bob) * (u * rho4 * u.adjoint()) +
           (m_alice + m_bob - m_alice * m_bob) * 0.25 * Matrix::Identity(4, 4);
}

Matrix bilateral_cnot_dense(const Matrix& rho_ctrl, const Matrix& rho_tgt, double y_alice,
                            double y_bob) {
    const Matrix joint = kron(rho_ctrl, rho_tgt);
    const Matrix& u = cnot16();
    return (1.0 - y_alice) * (1.0 - y_bob) * (u * joint * u.adjoint()) +
           (y_alice + y_bob - y_alice * y_bob) / 16.0 * Matrix::Identity(16, 16);
}

Matrix povm_z_up(double eta_alice, double eta_bob) {
    return kron(Matrix::Identity(4, 4),
                kron(meas_up(eta_alice, false), meas_up(eta_bob, false)));
}

Matrix povm_x_up(double eta_alice, double eta_bob) {
    return kron(kron(meas_up(eta_alice, true), meas_up(eta_bob, true)),
                Matrix::Identity(4, 4));
}

DenseProtocolResult run_protocol_dense(ProtocolId protocol, const DensityMatrix& rho_ctrl,
                                       const DensityMatrix& rho_tgt,
                                       const NoiseModel& model, double dt) {
    if (rho_ctrl.dim() != 4 || rho_tgt.dim() != 4) {
        throw std::domain_error("protocol inputs are one-pair density matrices");
    }
    model.validate();
    Matrix control = apply_memory_noise_dense(rho_ctrl.mat, model, dt);
    control = depolarize_qubit(control, 1, model.bob.lambda);
    control = depolarize_qubit(control, 0, model.alice.lambda);
    control = dephase_qubit(control, 1, model.bob.zeta);
    control = dephase_qubit(control, 0, model.alice.zeta);
    Matrix target = rho_tgt.mat;
    if (protocol == ProtocolId::C) {
        control = rotate_bilateral_rx_dense(control, model.alice.m, model.bob.m);
        target = rotate_bilateral_rx_dense(target, model.alice.m, model.bob.m);
    }
    const Matrix joint = bilateral_cnot_dense(control, target, model.alice.y, model.bob.y);

    Matrix povm;
    Matrix kept;
    double p;
    if (protocol == ProtocolId::B) {
        povm = povm_x_up(model.alice.eta_x, model.bob.eta_x);
        const Matrix selected = povm * joint;
        p = selected.trace().real();
        // keep the target pair: trace out A1 then B1
        kept = trace_out_qubit(trace_out_qubit(selected, 0), 0);
    } else {
        povm = povm_z_up(model.alice.eta_z, model.bob.eta_z);
        const Matrix selected = povm * joint;
        p = selected.trace().real();
        // keep the control pair: trace out B2 then A2
        kept = trace_out_qubit(trace_out_qubit(selected, 3), 2);
    }
    if (!(p > 0.0)) {
        throw std::domain_error("coincidence probability vanishes; conditional state undefined");
    }
    kept /= p;
    // The POVM element is diagonal in a product basis of the measured pair,
    // so tracing M*rho over that pair already yields the conditional state.
    kept = Matrix(0.5 * (kept + kept.adjoint()));
    return {p, DensityMatrix(kept)};
}

}  // namespace distimator::oracle
