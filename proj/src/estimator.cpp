#include "distimator/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace distimator {

double hoeffding_tail(std::int64_t n, double t, double lo, double hi) {
    if (n < 1) throw std::domain_error("sample count must be at least 1");
    if (!(t > 0.0)) throw std::domain_error("deviation must be positive");
    if (!(hi > lo)) throw std::domain_error("variable bounds must satisfy hi > lo");
    const double span = hi - lo;
    return std::exp(-2.0 * static_cast<double>(n) * t * t / (span * span));
}

BisectionResult bisection_search(const std::function<double(double)>& f, double a0,
                                 double b0, double target, double eps,
                                 Orientation orientation) {
    if (!(b0 > a0)) throw std::domain_error("search interval must satisfy b0 > a0");
    if (!(eps > 0.0)) throw std::domain_error("statistical error must be positive");
    const double eps_bis = eps * eps * eps;
    const double fa = f(a0);
    const double fb = f(b0);
    const bool increasing = orientation == Orientation::Increasing;
    const double f_lo = increasing ? fa : fb;  // smallest reachable value
    const double f_hi = increasing ? fb : fa;
    if (target < f_lo) return {increasing ? a0 : b0, true, 0};
    if (target > f_hi) return {increasing ? b0 : a0, true, 0};
    // endpoints carry no sign information when they hit the target exactly
    if (fa == target) return {a0, false, 0};
    if (fb == target) return {b0, false, 0};

    const int n_half =
        static_cast<int>(std::ceil(std::log2((b0 - a0) / eps_bis)));
    double a = a0, b = b0, va = fa;
    double mid = 0.5 * (a + b);
    for (int n = 1; n <= n_half; ++n) {
        mid = 0.5 * (a + b);
        const double vm = f(mid);
        if (vm == target || 0.5 * (b - a) <= eps_bis) {
            return {mid, false, n};
        }
        if ((vm > target) == (va > target)) {
            a = mid;
            va = vm;
        } else {
            b = mid;
        }
    }
    return {0.5 * (a + b), false, n_half};
}

std::array<double, 4> x_to_q(const std::array<double, 3>& x) {
    for (double xi : x) {
        if (!(xi >= 0.5 && xi <= 1.0)) {
            throw std::domain_error("intermediate variables must lie in [1/2, 1]");
        }
    }
    return {0.5 * (-1.0 + x[0] + x[1] + x[2]), 0.5 * (1.0 + x[0] - x[1] - x[2]),
            0.5 * (1.0 - x[0] + x[1] - x[2]), 0.5 * (1.0 - x[0] - x[1] + x[2])};
}

namespace {

// Hoeffding term for one deviation threshold; a nonpositive threshold gives
// no information and contributes the vacuous bound 1.
double hoeffding_term(std::int64_t n, double eps_m) {
    if (!(eps_m > 0.0)) return 1.0;
    return std::exp(-2.0 * static_cast<double>(n) * eps_m * eps_m);
}

void check_p_hat(double p_hat) {
    if (!(p_hat >= 0.0 && p_hat <= 1.0)) {
        throw std::domain_error("empirical statistic must lie in [0, 1]");
    }
}

void check_eps(double eps, double limit) {
    if (!(eps > 0.0 && eps < limit)) {
        throw std::domain_error("error bound outside its valid range");
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

EstimateReport estimate_werner_depolarized(double p_hat, double s_avg, std::int64_t n,
                                           double eps_w, WernerBracket bracket) {
    check_p_hat(p_hat);
    if (n < 1) throw std::domain_error("sample count must be at least 1");
    if (!(s_avg > 0.0 && s_avg <= 1.0)) {
        throw std::domain_error("mean survival must lie in (0, 1]");
    }
    check_eps(eps_w, 2.0 / 3.0);
    if (!(bracket.lo >= 0.0 && bracket.hi <= 1.0 && bracket.hi > bracket.lo)) {
        throw std::domain_error("invalid werner bracket");
    }

    // Invert p_S = (S w^2 - 2 S w + S + 1)/4 over the bracket; u is the
    // squared distance of w_hat from 1.
    const double u = (4.0 * p_hat - 1.0) / s_avg;
    const double u_lo = (1.0 - bracket.hi) * (1.0 - bracket.hi);
    const double u_hi = (1.0 - bracket.lo) * (1.0 - bracket.lo);
    bool clamped = false;
    double w_hat;
    if (u < u_lo) {
        w_hat = bracket.hi;
        clamped = true;
    } else if (u > u_hi) {
        w_hat = bracket.lo;
        clamped = true;
    } else {
        w_hat = 1.0 - std::sqrt(u);
    }

    const double eps_l = 0.25 * s_avg * (-eps_w * eps_w + 2.0 * eps_w * (1.0 - w_hat));
    const double eps_r = 0.25 * s_avg * (eps_w * eps_w + 2.0 * eps_w * (1.0 - w_hat));
    const double raw = hoeffding_term(n, eps_l) + hoeffding_term(n, eps_r);

    EstimateReport report;
    report.w_hat = w_hat;
    report.eps_left = {eps_l};
    report.eps_right = {eps_r};
    report.delta_raw = raw;
    report.delta = std::min(raw, 1.0);
    report.clamped = {clamped};
    report.consumed = consumed_pairs(p_hat, n);
    return report;
}

EstimateReport estimate_werner_noiseless(double p_hat, std::int64_t n, double eps_w,
                                         WernerBracket bracket) {
    return estimate_werner_depolarized(p_hat, 1.0, n, eps_w, bracket);
}

EstimateReport estimate_werner_from_stat(const StatisticModel& stat, double p_hat,
                                         std::int64_t n, double eps_w,
                                         WernerBracket bracket) {
    check_p_hat(p_hat);
    if (n < 1) throw std::domain_error("sample count must be at least 1");
    check_eps(eps_w, 2.0 / 3.0);

    // D1 is monotonically decreasing in w.
    const auto d1 = [&stat](double w) { return stat.eval_werner(w); };
    const BisectionResult root = bisection_search(d1, bracket.lo, bracket.hi, p_hat,
                                                  eps_w, Orientation::Decreasing);
    const double w_hat = root.root;
    // Back-propagation evaluates the quadratic continuation of D1 at
    // w_hat +- eps_w even when that leaves the bracket; clamping there would
    // void the bound on the side that carries no room.
    const double eps_l = p_hat - stat.eval_werner(w_hat + eps_w);
    const double eps_r = stat.eval_werner(w_hat - eps_w) - p_hat;
    const double raw = hoeffding_term(n, eps_l) + hoeffding_term(n, eps_r);

    EstimateReport report;
    report.w_hat = w_hat;
    report.eps_left = {eps_l};
    report.eps_right = {eps_r};
    report.delta_raw = raw;
    report.delta = std::min(raw, 1.0);
    report.clamped = {root.clamped};
    report.consumed = consumed_pairs(p_hat, n);
    return report;
}

EstimateReport estimate_werner(const ExperimentLog& log, double eps_w,
                               WernerBracket bracket) {
    if (log.protocol != ProtocolId::A) {
        throw std::domain_error("werner estimation expects a protocol-A log");
    }
    const StatisticModel stat(log);
    return estimate_werner_from_stat(stat, log.p_hat(), log.n_rounds, eps_w, bracket);
}

namespace {

struct ChannelInversion {
    double x_hat;
    double eps_l;
    double eps_r;
    bool clamped;
    double delta_channel;  // per-channel two-sided sum, clamped to [0,1]
    double delta_channel_raw;
};

EstimateReport combine_bell_channels(const std::array<ChannelInversion, 3>& ch,
                                     const std::array<double, 3>& p_hats,
                                     const std::array<std::int64_t, 3>& ns,
                                     const std::array<double, 3>& eps) {
    EstimateReport report;
    report.x_hat = {ch[0].x_hat, ch[1].x_hat, ch[2].x_hat};
    std::array<double, 4> q = x_to_q(*report.x_hat);

    // Independent clamping can push entries a hair below zero. Entries
    // within the combined bisection tolerance are zeroed and renormalized;
    // larger negatives are reported as-is with the validity flag cleared,
    // since projecting them would hide an estimator failure.
    const double tol =
        0.5 * (eps[0] * eps[0] * eps[0] + eps[1] * eps[1] * eps[1] +
               eps[2] * eps[2] * eps[2]);
    double min_entry = 0.0;
    for (double v : q) min_entry = std::min(min_entry, v);
    if (min_entry < -tol) {
        report.q_valid = false;
    } else if (min_entry < 0.0) {
        double sum = 0.0;
        for (double& v : q) {
            if (v < 0.0) v = 0.0;
            sum += v;
        }
        for (double& v : q) v /= sum;
    }
    report.q_hat = q;

    // 1 - prod(1 - delta_i) through log1p/expm1 so that exponentially small
    // failure bounds survive instead of rounding to zero.
    double log_product = 0.0;
    double log_product_raw = 0.0;
    double consumed = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        report.eps_left.push_back(ch[i].eps_l);
        report.eps_right.push_back(ch[i].eps_r);
        report.clamped.push_back(ch[i].clamped);
        log_product += std::log1p(-ch[i].delta_channel);
        log_product_raw += std::log1p(-std::min(ch[i].delta_channel_raw, 1.0));
        consumed += consumed_pairs(p_hats[i], ns[i]);
    }
    report.delta = -std::expm1(log_product);
    report.delta_raw = -std::expm1(log_product_raw);
    report.consumed = consumed;
    return report;
}

}  // namespace

EstimateReport estimate_bell_noiseless(const std::array<double, 3>& p_hats,
                                       const std::array<std::int64_t, 3>& ns,
                                       const std::array<double, 3>& eps) {
    std::array<ChannelInversion, 3> ch;
    for (std::size_t i = 0; i < 3; ++i) {
        check_p_hat(p_hats[i]);
        if (ns[i] < 1) throw std::domain_error("sample count must be at least 1");
        check_eps(eps[i], 0.5);
        const double disc = 4.0 * p_hats[i] - 1.0;
        bool clamped = false;
        double x_hat;
        if (disc < 0.0) {
            x_hat = 0.5;
            clamped = true;
        } else if (disc > 1.0) {
            x_hat = 1.0;
            clamped = true;
        } else {
            x_hat = 0.5 * (1.0 + std::sqrt(disc));
        }
        const double eps_l = -eps[i] * eps[i] + eps[i] * (2.0 * x_hat - 1.0);
        const double eps_r = eps[i] * eps[i] + eps[i] * (2.0 * x_hat - 1.0);
        const double raw = hoeffding_term(ns[i], eps_l) + hoeffding_term(ns[i], eps_r);
        ch[i] = {x_hat, eps_l, eps_r, clamped, std::min(raw, 1.0), raw};
    }
    return combine_bell_channels(ch, p_hats, ns, eps);
}

EstimateReport estimate_bell_from_stats(const std::array<const StatisticModel*, 3>& stats,
                                        const std::array<double, 3>& p_hats,
                                        const std::array<std::int64_t, 3>& ns,
                                        const std::array<double, 3>& eps) {
    std::array<ChannelInversion, 3> ch;
    for (std::size_t i = 0; i < 3; ++i) {
        check_p_hat(p_hats[i]);
        if (ns[i] < 1) throw std::domain_error("sample count must be at least 1");
        check_eps(eps[i], 0.5);
        const StatisticModel& stat = *stats[i];
        const auto di = [&stat](double x) { return stat.eval_x(x); };
        // D_i is monotonically increasing in x_i on [1/2, 1].
        const BisectionResult root =
            bisection_search(di, 0.5, 1.0, p_hats[i], eps[i], Orientation::Increasing);
        const double x_hat = root.root;
        const double eps_l = p_hats[i] - stat.eval_x(x_hat - eps[i]);
        const double eps_r = stat.eval_x(x_hat + eps[i]) - p_hats[i];
        const double raw = hoeffding_term(ns[i], eps_l) + hoeffding_term(ns[i], eps_r);
        ch[i] = {x_hat, eps_l, eps_r, root.clamped, std::min(raw, 1.0), raw};
    }
    return combine_bell_channels(ch, p_hats, ns, eps);
}

EstimateReport estimate_bell(const ExperimentLog& log_a, const ExperimentLog& log_b,
                             const ExperimentLog& log_c,
                             const std::array<double, 3>& eps) {
    if (log_a.protocol != ProtocolId::A || log_b.protocol != ProtocolId::B ||
        log_c.protocol != ProtocolId::C) {
        throw std::domain_error("bell estimation expects protocol A, B, C logs in order");
    }
    const StatisticModel sa(log_a), sb(log_b), sc(log_c);
    return estimate_bell_from_stats({&sa, &sb, &sc},
                                    {log_a.p_hat(), log_b.p_hat(), log_c.p_hat()},
                                    {log_a.n_rounds, log_b.n_rounds, log_c.n_rounds}, eps);
}

double arbitrary_state_bound(const BellVector& q, double eps_T) {
    if (!(eps_T >= 0.0)) throw std::domain_error("eps_T must be nonnegative");
    double sum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const double q2 = q[k] * q[k];
        sum += std::sqrt(q2 * (1.0 - q2));
    }
    return eps_T + sum;
}

std::int64_t werner_sample_bound(double delta, double eps_w) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must lie in (0,1)");
    check_eps(eps_w, 2.0 / 3.0);
    const double denom = eps_w * eps_w * (2.0 / 3.0 - eps_w) * (2.0 / 3.0 - eps_w);
    return static_cast<std::int64_t>(std::ceil(8.0 * std::log(2.0 / delta) / denom));
}

std::int64_t bell_sample_bound(double delta, double eps_T, double x_max) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must lie in (0,1)");
    if (!(x_max > 0.5 && x_max <= 1.0)) {
        throw std::domain_error("x_max must lie in (1/2, 1]");
    }
    const double e = eps_T / 3.0;
    if (!(e > 0.0 && e < 2.0 * x_max - 1.0)) {
        throw std::domain_error("eps_T/3 must lie in (0, 2 x_max - 1)");
    }
    const double margin = -e * e + e * (2.0 * x_max - 1.0);
    return static_cast<std::int64_t>(
        std::ceil(std::log(8.0 / delta) / (2.0 * margin * margin)));
}

double tomography_werner_up_prob(double w) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("w must lie in [0,1]");
    return 0.25 * (2.0 - w);
}

double tomography_werner_delta(std::int64_t n, double eps_w) {
    if (n < 1) throw std::domain_error("sample count must be at least 1");
    if (!(eps_w > 0.0)) throw std::domain_error("eps_w must be positive");
    return std::min(1.0, 2.0 * std::exp(-static_cast<double>(n) * eps_w * eps_w / 8.0));
}

std::int64_t tomography_werner_samples(double delta, double eps_w) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must lie in (0,1)");
    if (!(eps_w > 0.0)) throw std::domain_error("eps_w must be positive");
    return static_cast<std::int64_t>(
        std::ceil(8.0 * std::log(2.0 / delta) / (eps_w * eps_w)));
}

std::array<double, 3> tomography_bell_up_probs(const BellVector& q) {
    return {0.5 * q.x(1), 0.5 * q.x(2), 0.5 * (1.0 - q.x(3))};
}

double tomography_bell_delta(const std::array<std::int64_t, 3>& ns,
                             const std::array<double, 3>& eps) {
    double log_product = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (ns[i] < 1) throw std::domain_error("sample count must be at least 1");
        if (!(eps[i] > 0.0)) throw std::domain_error("eps must be positive");
        const double half = 0.5 * eps[i];
        const double term =
            std::min(1.0, 2.0 * std::exp(-2.0 * static_cast<double>(ns[i]) * half * half));
        log_product += std::log1p(-term);
    }
    return -std::expm1(log_product);
}

double consumed_pairs(double p, std::int64_t n) {
    check_p_hat(p);
    if (n < 0) throw std::domain_error("round count must be nonnegative");
    return (2.0 - p) * static_cast<double>(n);
}

double consumed_pairs(const std::vector<const ExperimentLog*>& logs) {
    double total = 0.0;
    for (const ExperimentLog* log : logs) {
        total += consumed_pairs(log->p_hat(), log->n_rounds);
    }
    return total;
}

double surviving_pairs(double p, std::int64_t n) {
    check_p_hat(p);
    return p * static_cast<double>(n);
}

namespace {

// Smallest integer n with delta(n) <= target for a nonincreasing delta(n).
std::int64_t solve_rounds(const std::function<double(double)>& delta_of_n,
                          double delta_target) {
    if (!(delta_target > 0.0 && delta_target < 1.0)) {
        throw std::domain_error("delta target must lie in (0,1)");
    }
    double lo = 1.0, hi = 1.0;
    while (delta_of_n(hi) > delta_target) {
        hi *= 2.0;
        if (hi > 1e15) throw std::domain_error("required rounds exceed 1e15");
    }
    for (int i = 0; i < 200 && hi - lo > 0.5; ++i) {
        const double mid = 0.5 * (lo + hi);
        (delta_of_n(mid) > delta_target ? lo : hi) = mid;
    }
    auto n = static_cast<std::int64_t>(std::ceil(hi));
    while (n > 1 && delta_of_n(static_cast<double>(n - 1)) <= delta_target) --n;
    while (delta_of_n(static_cast<double>(n)) > delta_target) ++n;
    return n;
}

}  // namespace

std::int64_t werner_required_rounds_depolarized(double w, double eps_w,
                                                double delta_target, double s_avg) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("w must lie in [0,1]");
    check_eps(eps_w, 2.0 / 3.0);
    if (!(s_avg > 0.0 && s_avg <= 1.0)) {
        throw std::domain_error("mean survival must lie in (0, 1]");
    }
    const double eps_l = 0.25 * s_avg * (-eps_w * eps_w + 2.0 * eps_w * (1.0 - w));
    const double eps_r = 0.25 * s_avg * (eps_w * eps_w + 2.0 * eps_w * (1.0 - w));
    if (!(eps_l > 0.0)) throw std::domain_error("no one-sided information at this w");
    return solve_rounds(
        [&](double n) {
            return std::exp(-2.0 * n * eps_l * eps_l) + std::exp(-2.0 * n * eps_r * eps_r);
        },
        delta_target);
}

std::int64_t werner_required_rounds(double w, double eps_w, double delta_target) {
    return werner_required_rounds_depolarized(w, eps_w, delta_target, 1.0);
}

std::int64_t bell_required_rounds(const std::array<double, 3>& x,
                                  const std::array<double, 3>& eps, double delta_target) {
    std::array<double, 3> eps_l, eps_r;
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(x[i] >= 0.5 && x[i] <= 1.0)) {
            throw std::domain_error("x must lie in [1/2, 1]");
        }
        check_eps(eps[i], 0.5);
        eps_l[i] = -eps[i] * eps[i] + eps[i] * (2.0 * x[i] - 1.0);
        eps_r[i] = eps[i] * eps[i] + eps[i] * (2.0 * x[i] - 1.0);
        if (!(eps_l[i] > 0.0)) {
            throw std::domain_error("no one-sided information at this x");
        }
    }
    return solve_rounds(
        [&](double n) {
            double product = 1.0;
            for (std::size_t i = 0; i < 3; ++i) {
                const double term = std::exp(-2.0 * n * eps_l[i] * eps_l[i]) +
                                    std::exp(-2.0 * n * eps_r[i] * eps_r[i]);
                product *= 1.0 - std::min(term, 1.0);
            }
            return 1.0 - product;
        },
        delta_target);
}

std::int64_t tomography_bell_required_rounds(const std::array<double, 3>& eps,
                                             double delta_target) {
    for (double e : eps) {
        if (!(e > 0.0)) throw std::domain_error("eps must be positive");
    }
    return solve_rounds(
        [&](double n) {
            double product = 1.0;
            for (double e : eps) {
                const double half = 0.5 * e;
                product *= 1.0 - std::min(1.0, 2.0 * std::exp(-2.0 * n * half * half));
            }
            return 1.0 - product;
        },
        delta_target);
}

std::string EstimateReport::to_key_value() const {
    std::ostringstream os;
    auto emit_list = [&os](const char* key, const std::vector<double>& vs) {
        os << key << "=";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            os << (i ? "," : "") << format_double(vs[i]);
        }
        os << "\n";
    };
    if (w_hat) os << "w_hat=" << format_double(*w_hat) << "\n";
    if (q_hat) {
        os << "q_hat=";
        for (std::size_t i = 0; i < 4; ++i) os << (i ? "," : "") << format_double((*q_hat)[i]);
        os << "\n";
    }
    if (x_hat) {
        os << "x_hat=";
        for (std::size_t i = 0; i < 3; ++i) os << (i ? "," : "") << format_double((*x_hat)[i]);
        os << "\n";
    }
    emit_list("eps_left", eps_left);
    emit_list("eps_right", eps_right);
    os << "delta=" << format_double(delta) << "\n";
    os << "clamped=";
    for (std::size_t i = 0; i < clamped.size(); ++i) {
        os << (i ? "," : "") << (clamped[i] ? "1" : "0");
    }
    os << "\n";
    os << "consumed=" << format_double(consumed) << "\n";
    if (q_hat) os << "q_valid=" << (q_valid ? "1" : "0") << "\n";
    return os.str();
}

std::string EstimateReport::to_json_string(int indent) const {
    nlohmann::json j;
    if (w_hat) j["w_hat"] = *w_hat;
    if (q_hat) j["q_hat"] = *q_hat;
    if (x_hat) j["x_hat"] = *x_hat;
    j["eps_left"] = eps_left;
    j["eps_right"] = eps_right;
    j["delta"] = delta;
    j["clamped"] = clamped;
    j["consumed"] = consumed;
    if (q_hat) j["q_valid"] = q_valid;
    return j.dump(indent);
}

}  // namespace distimator
