// distimator: simulate noisy two-way distillation experiments and invert
// their statistics into Bell-diagonal state estimates.
//
// Exit codes: 0 success, 2 usage/config error, 3 I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "distimator/estimator.hpp"
#include "distimator/log_io.hpp"

using namespace distimator;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// --- config-file overlay ------------------------------------------------
// A JSON config supplies values for long options by name (without the
// leading dashes); explicit command-line flags win.

struct ConfigBinding {
    CLI::Option* opt;
    std::function<void(const json&)> apply;
};

class ConfigRegistry {
  public:
    template <typename T>
    void bind(CLI::Option* opt, T& target, const std::string& key) {
        bindings_[key] = {opt, [&target](const json& v) { target = v.get<T>(); }};
    }

    void apply_file(const std::string& path) const {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config file '" + path + "'");
        json cfg;
        try {
            in >> cfg;
        } catch (const json::exception& e) {
            throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
        }
        if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
        for (const auto& [key, value] : cfg.items()) {
            const auto it = bindings_.find(key);
            if (it == bindings_.end()) {
                throw UsageError("unknown config key '" + key + "'");
            }
            if (it->second.opt->count() > 0) continue;  // flag overrides file
            try {
                it->second.apply(value);
            } catch (const json::exception& e) {
                throw UsageError("config key '" + key + "': " + e.what());
            }
        }
    }

  private:
    std::map<std::string, ConfigBinding> bindings_;
};

template <typename T>
CLI::Option* add_opt(CLI::App* app, ConfigRegistry& reg, const std::string& flag,
                     T& target, const std::string& desc) {
    CLI::Option* opt = app->add_option(flag, target, desc);
    reg.bind(opt, target, flag.substr(2));
    return opt;
}

// --- shared flag groups ---------------------------------------------------

struct NoiseFlags {
    double lambda_a = 0.0, lambda_b = 0.0;
    double zeta_a = 0.0, zeta_b = 0.0;
    double m_a = 0.0, m_b = 0.0;
    double y_a = 0.0, y_b = 0.0;
    double eta_z_a = 1.0, eta_z_b = 1.0;
    double eta_x_a = 1.0, eta_x_b = 1.0;
    double t_dpo_a = 1.0, t_dpo_b = 1.0, t_dph_a = 1.0, t_dph_b = 1.0;

    NoiseModel to_model() const {
        NoiseModel m;
        m.alice = {lambda_a, zeta_a, m_a, y_a, eta_z_a, eta_x_a};
        m.bob = {lambda_b, zeta_b, m_b, y_b, eta_z_b, eta_x_b};
        m.t_dpo_a = t_dpo_a;
        m.t_dpo_b = t_dpo_b;
        m.t_dph_a = t_dph_a;
        m.t_dph_b = t_dph_b;
        m.validate();
        return m;
    }
};

void add_noise_flags(CLI::App* app, ConfigRegistry& reg, NoiseFlags& n) {
    add_opt(app, reg, "--lambda-a", n.lambda_a, "Alice preparation depolarizing probability");
    add_opt(app, reg, "--lambda-b", n.lambda_b, "Bob preparation depolarizing probability");
    add_opt(app, reg, "--zeta-a", n.zeta_a, "Alice preparation dephasing probability");
    add_opt(app, reg, "--zeta-b", n.zeta_b, "Bob preparation dephasing probability");
    add_opt(app, reg, "--m-a", n.m_a, "Alice rotation depolarizing probability");
    add_opt(app, reg, "--m-b", n.m_b, "Bob rotation depolarizing probability");
    add_opt(app, reg, "--y-a", n.y_a, "Alice CNOT depolarizing probability");
    add_opt(app, reg, "--y-b", n.y_b, "Bob CNOT depolarizing probability");
    add_opt(app, reg, "--eta-z-a", n.eta_z_a, "Alice Z-measurement non-error probability");
    add_opt(app, reg, "--eta-z-b", n.eta_z_b, "Bob Z-measurement non-error probability");
    add_opt(app, reg, "--eta-x-a", n.eta_x_a, "Alice X-measurement non-error probability");
    add_opt(app, reg, "--eta-x-b", n.eta_x_b, "Bob X-measurement non-error probability");
    add_opt(app, reg, "--t-dpo-a", n.t_dpo_a, "Alice depolarizing characteristic time");
    add_opt(app, reg, "--t-dpo-b", n.t_dpo_b, "Bob depolarizing characteristic time");
    add_opt(app, reg, "--t-dph-a", n.t_dph_a, "Alice dephasing characteristic time");
    add_opt(app, reg, "--t-dph-b", n.t_dph_b, "Bob dephasing characteristic time");
}

BellVector parse_state(const std::string& text) {
    std::array<double, 4> q{};
    std::istringstream in(text);
    std::string item;
    for (std::size_t k = 0; k < 4; ++k) {
        if (!std::getline(in, item, ',')) {
            throw UsageError("--state needs four comma-separated weights");
        }
        q[k] = std::stod(item);
    }
    if (std::getline(in, item, ',')) {
        throw UsageError("--state needs exactly four weights");
    }
    try {
        return BellVector(q);
    } catch (const std::domain_error& e) {
        throw UsageError(std::string("--state: ") + e.what());
    }
}

class OutputFile {
  public:
    explicit OutputFile(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw IoError("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void finish() {
        if (file_.is_open()) {
            file_.flush();
            if (!file_) throw IoError("failed writing output file");
        }
    }

  private:
    std::ofstream file_;
};

std::vector<double> linspace(double lo, double hi, std::int64_t count) {
    if (count < 0) throw UsageError("grid count must be nonnegative");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    for (std::int64_t i = 0; i < count; ++i) {
        out.push_back(lo + (hi - lo) * double(i) / double(count - 1));
    }
    return out;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::string out;
    std::string protocol = "a";
    std::int64_t rounds = 0;
    std::uint64_t seed = 0;
    double werner = -1.0;
    std::string state;
    double p_g = 0.2;
    double delay_scale = 100.0;
    NoiseFlags noise;
    std::string config;
};

void run_simulate(const SimulateArgs& a, const CLI::App* cmd) {
    if (a.out.empty()) throw UsageError("--out is required");
    if (a.rounds <= 0) throw UsageError("--rounds must be at least 1");
    const bool has_w = cmd->count("--werner") > 0 || a.werner >= 0.0;
    const bool has_state = !a.state.empty();
    if (has_w == has_state) {
        throw UsageError("pass exactly one of --werner and --state");
    }
    BellVector q = has_w ? werner_vector(a.werner) : parse_state(a.state);

    ExperimentConfig cfg;
    cfg.protocol = protocol_from_tag(a.protocol.empty() ? 'a' : a.protocol[0]);
    cfg.n_rounds = a.rounds;
    cfg.p_g = a.p_g;
    cfg.delay_scale = a.delay_scale;
    cfg.model = a.noise.to_model();
    cfg.seed = a.seed;
    cfg.validate();

    const ExperimentLog log = run_experiment(q, cfg);
    write_log_file(a.out, log);
    std::cout << "wrote " << a.out << " (" << log.n_success << "/" << log.n_rounds
              << " successes)\n";
}

// --- estimate ---------------------------------------------------------------

struct EstimateArgs {
    std::vector<std::string> logs;
    std::string mode = "auto";
    std::vector<double> eps = {0.01};
    double bracket_lo = 0.0;
    double bracket_hi = 2.0 / 3.0;
    std::string out;
    std::string csv;
    bool pretty = false;
    std::string config;
};

void append_csv_row(const std::string& path, const EstimateReport& rep,
                    const std::string& mode) {
    const bool fresh = !std::ifstream(path).good();
    std::ofstream out(path, std::ios::app);
    if (!out) throw IoError("cannot open '" + path + "' for appending");
    if (fresh) {
        out << "mode,w_hat,q_hat_1,q_hat_2,q_hat_3,q_hat_4,delta,consumed,clamped\n";
    }
    bool any_clamped = false;
    for (bool c : rep.clamped) any_clamped = any_clamped || c;
    out << mode << ",";
    out << (rep.w_hat ? fmt(*rep.w_hat) : "") << ",";
    for (std::size_t k = 0; k < 4; ++k) {
        out << (rep.q_hat ? fmt((*rep.q_hat)[k]) : "") << ",";
    }
    out << fmt(rep.delta) << "," << fmt(rep.consumed) << "," << (any_clamped ? 1 : 0)
        << "\n";
    if (!out) throw IoError("failed appending to '" + path + "'");
}

void run_estimate(const EstimateArgs& a) {
    if (a.logs.empty()) throw UsageError("at least one --log is required");
    std::vector<ExperimentLog> logs;
    logs.reserve(a.logs.size());
    for (const std::string& path : a.logs) logs.push_back(read_log_file(path));

    std::string mode = a.mode;
    if (mode == "auto") {
        mode = logs.size() == 1 ? "werner" : "bell";
    }

    EstimateReport rep;
    if (mode == "werner") {
        if (logs.size() != 1) {
            throw UsageError("werner mode takes exactly one protocol-A log");
        }
        if (a.eps.size() != 1) throw UsageError("werner mode takes a single --eps");
        rep = estimate_werner(logs[0], a.eps[0], {a.bracket_lo, a.bracket_hi});
    } else if (mode == "bell") {
        if (logs.size() != 3) {
            throw UsageError("bell mode takes three logs, protocols a, b and c");
        }
        std::array<const ExperimentLog*, 3> ordered{nullptr, nullptr, nullptr};
        for (const ExperimentLog& log : logs) {
            ordered[static_cast<std::size_t>(log.protocol)] = &log;
        }
        if (!ordered[0] || !ordered[1] || !ordered[2]) {
            throw UsageError("bell mode needs one log per protocol a, b and c");
        }
        std::array<double, 3> eps{};
        if (a.eps.size() == 1) {
            eps.fill(a.eps[0]);
        } else if (a.eps.size() == 3) {
            std::copy(a.eps.begin(), a.eps.end(), eps.begin());
        } else {
            throw UsageError("--eps takes one or three values in bell mode");
        }
        rep = estimate_bell(*ordered[0], *ordered[1], *ordered[2], eps);
    } else {
        throw UsageError("--mode must be werner, bell or auto");
    }

    const std::string text = rep.to_json_string(a.pretty ? 2 : -1);
    if (!a.out.empty() && a.out != "-") {
        std::ofstream out(a.out);
        if (!out) throw IoError("cannot open '" + a.out + "' for writing");
        out << text << "\n";
    }
    std::cout << text << "\n";
    if (!a.csv.empty()) append_csv_row(a.csv, rep, mode);
}

// --- sweep-werner -------------------------------------------------------

struct SweepWernerArgs {
    bool simulate = false;
    double w_min = 0.0;
    double w_max = 0.6;
    std::int64_t w_count = 13;
    std::vector<double> eps_list = {0.005, 0.01, 0.02};
    double eps = 0.01;
    double delta = 1e-2;
    double s_avg = std::exp(-0.25);
    std::int64_t rounds = 1000000;
    std::uint64_t seed = 1;
    double p_g = 0.2;
    double delay_scale = 100.0;
    NoiseFlags noise;
    std::string out;
    std::string config;
};

void run_sweep_werner(const SweepWernerArgs& a) {
    OutputFile out(a.out);
    const std::vector<double> ws = linspace(a.w_min, a.w_max, a.w_count);

    if (!a.simulate) {
        // resource comparison at the target failure bound (no simulation)
        out.stream() << "w,eps,delta_target,p1,n_rounds,n_consumed,"
                        "n_rounds_depolarized,n_consumed_depolarized,n_tomography\n";
        for (double w : ws) {
            const double p1 = 0.25 * (2.0 - 2.0 * w + w * w);
            const double p1s = 0.25 * (a.s_avg * w * w - 2.0 * a.s_avg * w + a.s_avg + 1.0);
            for (double eps : a.eps_list) {
                const std::int64_t n = werner_required_rounds(w, eps, a.delta);
                const std::int64_t nd =
                    werner_required_rounds_depolarized(w, eps, a.delta, a.s_avg);
                out.stream() << fmt(w) << "," << fmt(eps) << "," << fmt(a.delta) << ","
                             << fmt(p1) << "," << n << "," << fmt(consumed_pairs(p1, n))
                             << "," << nd << "," << fmt(consumed_pairs(p1s, nd)) << ","
                             << tomography_werner_samples(a.delta, eps) << "\n";
            }
        }
        out.finish();
        // report where distillation stops beating tomography
        json summary;
        for (double eps : a.eps_list) {
            const auto consumed_at = [&](double w) {
                const std::int64_t n = werner_required_rounds(w, eps, a.delta);
                return consumed_pairs(0.25 * (2.0 - 2.0 * w + w * w), n);
            };
            const double n_tom = double(tomography_werner_samples(a.delta, eps));
            double lo = 0.0, hi = 2.0 / 3.0 - eps / 2.0;
            json value;
            if (consumed_at(lo) >= n_tom) {
                value = nullptr;  // tomography already ahead at w = 0
            } else if (consumed_at(hi) < n_tom) {
                value = nullptr;  // distillation ahead everywhere
            } else {
                for (int i = 0; i < 80; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    (consumed_at(mid) < n_tom ? lo : hi) = mid;
                }
                value = 0.5 * (lo + hi);
            }
            char key[32];
            std::snprintf(key, sizeof(key), "%g", eps);
            summary["crossover_w"][key] = value;
        }
        std::cout << summary.dump() << "\n";
        return;
    }

    const NoiseModel model = a.noise.to_model();
    out.stream() << "w,eps,p_hat,w_hat,abs_error,trace_distance,delta,n_rounds,"
                    "n_consumed,n_tomography\n";
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const double w = ws[i];
        ExperimentConfig cfg;
        cfg.protocol = ProtocolId::A;
        cfg.n_rounds = a.rounds;
        cfg.p_g = a.p_g;
        cfg.delay_scale = a.delay_scale;
        cfg.model = model;
        cfg.seed = a.seed + i;
        const ExperimentLog log = run_experiment(werner_vector(w), cfg);
        const EstimateReport rep = estimate_werner(log, a.eps);
        out.stream() << fmt(w) << "," << fmt(a.eps) << "," << fmt(log.p_hat()) << ","
                     << fmt(*rep.w_hat) << "," << fmt(std::abs(*rep.w_hat - w)) << ","
                     << fmt(trace_distance(werner_vector(*rep.w_hat), werner_vector(w)))
                     << "," << fmt(rep.delta) << "," << a.rounds << ","
                     << fmt(rep.consumed) << ","
                     << tomography_werner_samples(a.delta, a.eps) << "\n";
    }
    out.finish();
}

// --- sweep-bell -----------------------------------------------------------

struct SweepBellArgs {
    bool simulate = false;
    double q1_min = 0.55;
    double q1_max = 0.95;
    std::int64_t q1_count = 9;
    double q2_min = 0.0;
    double q2_max = 0.2;
    std::int64_t q2_count = 5;
    std::vector<double> eps = {0.01};
    double delta = 1e-2;
    std::int64_t rounds = 200000;
    std::uint64_t seed = 1;
    double p_g = 0.2;
    double delay_scale = 100.0;
    NoiseFlags noise;
    std::string out;
    std::string config;
};

void run_sweep_bell(const SweepBellArgs& a) {
    std::array<double, 3> eps{};
    if (a.eps.size() == 1) {
        eps.fill(a.eps[0]);
    } else if (a.eps.size() == 3) {
        std::copy(a.eps.begin(), a.eps.end(), eps.begin());
    } else {
        throw UsageError("--eps takes one or three values");
    }

    OutputFile out(a.out);
    const std::vector<double> q1s = linspace(a.q1_min, a.q1_max, a.q1_count);
    const std::vector<double> q2s = linspace(a.q2_min, a.q2_max, a.q2_count);

    if (!a.simulate) {
        out.stream() << "q1,q2,q3,q4,x1,x2,x3,p1,p2,p3,n_rounds_required,n_consumed,"
                        "n_tomography_required,n_tomography_total\n";
        for (double q1 : q1s) {
            for (double q2 : q2s) {
                const double rest = 1.0 - q1 - q2;
                if (rest < -1e-12 || q2 < 0.0) continue;  // infeasible corner
                const BellVector q(q1, q2, 0.5 * rest, 0.5 * rest);
                const std::array<double, 3> x = {q.x(1), q.x(2), q.x(3)};
                const std::array<double, 3> p = {
                    noiseless_success(ProtocolId::A, q),
                    noiseless_success(ProtocolId::B, q),
                    noiseless_success(ProtocolId::C, q),
                };
                out.stream() << fmt(q1) << "," << fmt(q2) << "," << fmt(0.5 * rest) << ","
                             << fmt(0.5 * rest);
                for (double v : x) out.stream() << "," << fmt(v);
                for (double v : p) out.stream() << "," << fmt(v);
                // required rounds are undefined where a channel carries no
                // signal (x_i at 1/2); leave those entries empty
                try {
                    const std::int64_t n = bell_required_rounds(x, eps, a.delta);
                    double consumed = 0.0;
                    for (double v : p) consumed += consumed_pairs(v, n);
                    out.stream() << "," << n << "," << fmt(consumed);
                } catch (const std::domain_error&) {
                    out.stream() << ",,";
                }
                const std::int64_t nt = tomography_bell_required_rounds(eps, a.delta);
                out.stream() << "," << nt << "," << 3 * nt << "\n";
            }
        }
        out.finish();
        return;
    }

    const NoiseModel model = a.noise.to_model();
    out.stream() << "q1,q2,q3,q4,p_hat_1,p_hat_2,p_hat_3,q_hat_1,q_hat_2,q_hat_3,"
                    "q_hat_4,trace_distance,delta,n_consumed,n_tomography_total\n";
    std::size_t point = 0;
    for (double q1 : q1s) {
        for (double q2 : q2s) {
            const double rest = 1.0 - q1 - q2;
            if (rest < -1e-12 || q2 < 0.0) continue;
            if (!(q1 > 0.5)) continue;  // outside the gauge-fixed regime
            const BellVector truth(q1, q2, 0.5 * rest, 0.5 * rest);
            std::array<ExperimentLog, 3> logs;
            for (int p = 0; p < 3; ++p) {
                ExperimentConfig cfg;
                cfg.protocol = static_cast<ProtocolId>(p);
                cfg.n_rounds = a.rounds;
                cfg.p_g = a.p_g;
                cfg.delay_scale = a.delay_scale;
                cfg.model = model;
                cfg.seed = a.seed + 1000003 * point;
                logs[static_cast<std::size_t>(p)] = run_experiment(truth, cfg);
            }
            const EstimateReport rep = estimate_bell(logs[0], logs[1], logs[2], eps);
            double dist = 0.0;
            for (std::size_t k = 0; k < 4; ++k) {
                dist += std::abs((*rep.q_hat)[k] - truth[k]);
            }
            dist *= 0.5;
            out.stream() << fmt(q1) << "," << fmt(q2) << "," << fmt(0.5 * rest) << ","
                         << fmt(0.5 * rest);
            for (const auto& log : logs) out.stream() << "," << fmt(log.p_hat());
            for (std::size_t k = 0; k < 4; ++k) out.stream() << "," << fmt((*rep.q_hat)[k]);
            out.stream() << "," << fmt(dist) << "," << fmt(rep.delta) << ","
                         << fmt(rep.consumed) << ","
                         << 3 * tomography_bell_required_rounds(eps, a.delta) << "\n";
            ++point;
        }
    }
    out.finish();
}

// --- compare-tomography ---------------------------------------------------

struct CompareArgs {
    std::string mode = "werner";
    double delta = 1e-2;
    std::vector<double> eps_list = {0.005, 0.01, 0.02};
    double x_max = 0.95;
    std::string out;
    std::string config;
};

void run_compare(const CompareArgs& a) {
    OutputFile out(a.out);
    if (a.mode == "werner") {
        out.stream() << "eps,delta,n_distillation_bound,n_tomography\n";
        for (double eps : a.eps_list) {
            out.stream() << fmt(eps) << "," << fmt(a.delta) << ","
                         << werner_sample_bound(a.delta, eps) << ","
                         << tomography_werner_samples(a.delta, eps) << "\n";
        }
    } else if (a.mode == "bell") {
        out.stream() << "eps_t,x_max,delta,n_distillation_bound,n_tomography_required\n";
        for (double eps_t : a.eps_list) {
            const std::array<double, 3> per = {eps_t / 3.0, eps_t / 3.0, eps_t / 3.0};
            out.stream() << fmt(eps_t) << "," << fmt(a.x_max) << "," << fmt(a.delta) << ","
                         << bell_sample_bound(a.delta, eps_t, a.x_max) << ","
                         << tomography_bell_required_rounds(per, a.delta) << "\n";
        }
    } else {
        throw UsageError("--mode must be werner or bell");
    }
    out.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distimator: distillation-based Bell-diagonal state estimation"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success, 2 usage/config error, 3 I/O error.\n"
               "Config files are JSON objects whose keys are long option names\n"
               "without the leading dashes (e.g. {\"rounds\": 1000}); explicit\n"
               "flags override config values.");

    SimulateArgs sim;
    ConfigRegistry sim_reg;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Run one distillation experiment and write a distimator-log v1 file");
    add_opt(simulate, sim_reg, "--out", sim.out, "output log path (required)");
    add_opt(simulate, sim_reg, "--protocol", sim.protocol, "protocol: a, b or c");
    add_opt(simulate, sim_reg, "--rounds", sim.rounds,
            "number of protocol rounds (required)");
    add_opt(simulate, sim_reg, "--seed", sim.seed, "master seed");
    add_opt(simulate, sim_reg, "--werner", sim.werner, "werner parameter of the state");
    add_opt(simulate, sim_reg, "--state", sim.state,
            "bell weights q1,q2,q3,q4 of the state");
    add_opt(simulate, sim_reg, "--p-g", sim.p_g, "per-attempt generation probability");
    add_opt(simulate, sim_reg, "--delay-scale", sim.delay_scale,
            "divisor applied to the geometric draw");
    add_noise_flags(simulate, sim_reg, sim.noise);
    simulate->add_option("--config", sim.config, "JSON config file");

    EstimateArgs est;
    ConfigRegistry est_reg;
    CLI::App* estimate = app.add_subcommand(
        "estimate", "Invert experiment logs into a state estimate (JSON on stdout)");
    add_opt(estimate, est_reg, "--log", est.logs,
            "experiment log (one for werner mode, three for bell mode)");
    add_opt(estimate, est_reg, "--mode", est.mode, "werner, bell or auto");
    add_opt(estimate, est_reg, "--eps", est.eps,
            "error bound(s): one value, or three in bell mode");
    add_opt(estimate, est_reg, "--bracket-lo", est.bracket_lo,
            "werner search bracket lower end");
    add_opt(estimate, est_reg, "--bracket-hi", est.bracket_hi,
            "werner search bracket upper end");
    add_opt(estimate, est_reg, "--out", est.out, "also write the JSON report here");
    add_opt(estimate, est_reg, "--csv", est.csv,
            "append a flat CSV row (mode,w_hat,q_hat_1..4,delta,consumed,clamped)");
    estimate->add_flag("--pretty", est.pretty, "indent the JSON report");
    estimate->add_option("--config", est.config, "JSON config file");

    SweepWernerArgs sww;
    ConfigRegistry sww_reg;
    CLI::App* sweep_w = app.add_subcommand(
        "sweep-werner",
        "Werner-parameter sweep: resource bounds, or simulated estimation with "
        "--simulate (CSV)");
    sweep_w->add_flag("--simulate", sww.simulate,
                      "simulate seeded experiments instead of evaluating bounds");
    add_opt(sweep_w, sww_reg, "--w-min", sww.w_min, "grid start");
    add_opt(sweep_w, sww_reg, "--w-max", sww.w_max, "grid end");
    add_opt(sweep_w, sww_reg, "--w-count", sww.w_count, "grid points");
    add_opt(sweep_w, sww_reg, "--eps-list", sww.eps_list,
            "error bounds for the resource table");
    add_opt(sweep_w, sww_reg, "--eps", sww.eps, "error bound for simulated estimation");
    add_opt(sweep_w, sww_reg, "--delta", sww.delta, "target failure bound");
    add_opt(sweep_w, sww_reg, "--s-avg", sww.s_avg,
            "mean survival for the depolarized resource column");
    add_opt(sweep_w, sww_reg, "--rounds", sww.rounds, "rounds per simulated point");
    add_opt(sweep_w, sww_reg, "--seed", sww.seed, "master seed");
    add_opt(sweep_w, sww_reg, "--p-g", sww.p_g, "per-attempt generation probability");
    add_opt(sweep_w, sww_reg, "--delay-scale", sww.delay_scale,
            "divisor applied to the geometric draw");
    add_noise_flags(sweep_w, sww_reg, sww.noise);
    add_opt(sweep_w, sww_reg, "--out", sww.out, "CSV path (default stdout)");
    sweep_w->add_option("--config", sww.config, "JSON config file");

    SweepBellArgs swb;
    ConfigRegistry swb_reg;
    CLI::App* sweep_b = app.add_subcommand(
        "sweep-bell",
        "Bell-diagonal (q1,q2) sweep with q3=q4=(1-q1-q2)/2: resource bounds, or "
        "simulated estimation with --simulate (CSV)");
    sweep_b->add_flag("--simulate", swb.simulate,
                      "simulate seeded experiments instead of evaluating bounds");
    add_opt(sweep_b, swb_reg, "--q1-min", swb.q1_min, "q1 grid start");
    add_opt(sweep_b, swb_reg, "--q1-max", swb.q1_max, "q1 grid end");
    add_opt(sweep_b, swb_reg, "--q1-count", swb.q1_count, "q1 grid points");
    add_opt(sweep_b, swb_reg, "--q2-min", swb.q2_min, "q2 grid start");
    add_opt(sweep_b, swb_reg, "--q2-max", swb.q2_max, "q2 grid end");
    add_opt(sweep_b, swb_reg, "--q2-count", swb.q2_count, "q2 grid points");
    add_opt(sweep_b, swb_reg, "--eps", swb.eps, "error bound(s): one or three values");
    add_opt(sweep_b, swb_reg, "--delta", swb.delta, "target failure bound");
    add_opt(sweep_b, swb_reg, "--rounds", swb.rounds, "rounds per protocol per point");
    add_opt(sweep_b, swb_reg, "--seed", swb.seed, "master seed");
    add_opt(sweep_b, swb_reg, "--p-g", swb.p_g, "per-attempt generation probability");
    add_opt(sweep_b, swb_reg, "--delay-scale", swb.delay_scale,
            "divisor applied to the geometric draw");
    add_noise_flags(sweep_b, swb_reg, swb.noise);
    add_opt(sweep_b, swb_reg, "--out", swb.out, "CSV path (default stdout)");
    sweep_b->add_option("--config", swb.config, "JSON config file");

    CompareArgs cmp;
    ConfigRegistry cmp_reg;
    CLI::App* compare = app.add_subcommand(
        "compare-tomography",
        "Sample-count table: distillation-based estimation vs tomography (CSV)");
    add_opt(compare, cmp_reg, "--mode", cmp.mode, "werner or bell");
    add_opt(compare, cmp_reg, "--delta", cmp.delta, "target failure bound");
    add_opt(compare, cmp_reg, "--eps-list", cmp.eps_list,
            "error bounds (eps_w, or eps_T in bell mode)");
    add_opt(compare, cmp_reg, "--x-max", cmp.x_max,
            "largest intermediate estimate for the bell bound");
    add_opt(compare, cmp_reg, "--out", cmp.out, "CSV path (default stdout)");
    compare->add_option("--config", cmp.config, "JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) {
            if (!sim.config.empty()) sim_reg.apply_file(sim.config);
            run_simulate(sim, simulate);
        } else if (estimate->parsed()) {
            if (!est.config.empty()) est_reg.apply_file(est.config);
            run_estimate(est);
        } else if (sweep_w->parsed()) {
            if (!sww.config.empty()) sww_reg.apply_file(sww.config);
            run_sweep_werner(sww);
        } else if (sweep_b->parsed()) {
            if (!swb.config.empty()) swb_reg.apply_file(swb.config);
            run_sweep_bell(swb);
        } else if (compare->parsed()) {
            if (!cmp.config.empty()) cmp_reg.apply_file(cmp.config);
            run_compare(cmp);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
