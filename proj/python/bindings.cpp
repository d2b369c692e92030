#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "distimator/estimator.hpp"
#include "distimator/log_io.hpp"
#include "distimator/oracle.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace distimator;

namespace {

std::array<double, 4> weights_of(const BellVector& q) { return q.weights(); }

py::dict report_to_dict(const EstimateReport& rep) {
    py::dict d;
    if (rep.w_hat) d["w_hat"] = *rep.w_hat;
    if (rep.q_hat) d["q_hat"] = *rep.q_hat;
    if (rep.x_hat) d["x_hat"] = *rep.x_hat;
    d["eps_left"] = rep.eps_left;
    d["eps_right"] = rep.eps_right;
    d["delta"] = rep.delta;
    d["delta_raw"] = rep.delta_raw;
    d["clamped"] = rep.clamped;
    d["consumed"] = rep.consumed;
    d["q_valid"] = rep.q_valid;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Distillation-based Bell-diagonal state estimation";

    py::register_exception<std::domain_error>(m, "DomainError", PyExc_ValueError);

    py::enum_<Party>(m, "Party").value("ALICE", Party::Alice).value("BOB", Party::Bob);
    py::enum_<ProtocolId>(m, "Protocol")
        .value("A", ProtocolId::A)
        .value("B", ProtocolId::B)
        .value("C", ProtocolId::C);
    py::enum_<MeasBasis>(m, "Basis").value("Z", MeasBasis::Z).value("X", MeasBasis::X);
    py::enum_<CandidateKind>(m, "Candidate")
        .value("WERNER_W", CandidateKind::WernerW)
        .value("INTERMEDIATE_X", CandidateKind::IntermediateX);

    py::class_<BellVector>(m, "BellVector")
        .def(py::init<double, double, double, double>(), py::arg("q1"), py::arg("q2"),
             py::arg("q3"), py::arg("q4"))
        .def("weights", &weights_of)
        .def("x", &BellVector::x, py::arg("i"))
        .def("__getitem__",
             [](const BellVector& q, std::size_t k) {
                 if (k >= 4) throw py::index_error();
                 return q[k];
             })
        .def("__repr__", [](const BellVector& q) {
            std::ostringstream os;
            os << "BellVector(" << q[0] << ", " << q[1] << ", " << q[2] << ", " << q[3]
               << ")";
            return os.str();
        });

    py::class_<PartyNoise>(m, "PartyNoise")
        .def(py::init<>())
        .def_readwrite("lam", &PartyNoise::lambda)
        .def_readwrite("zeta", &PartyNoise::zeta)
        .def_readwrite("m", &PartyNoise::m)
        .def_readwrite("y", &PartyNoise::y)
        .def_readwrite("eta_z", &PartyNoise::eta_z)
        .def_readwrite("eta_x", &PartyNoise::eta_x);

    py::class_<NoiseModel>(m, "NoiseModel")
        .def(py::init<>())
        .def_static("noiseless", &NoiseModel::noiseless)
        .def_readwrite("alice", &NoiseModel::alice)
        .def_readwrite("bob", &NoiseModel::bob)
        .def_readwrite("t_dpo_a", &NoiseModel::t_dpo_a)
        .def_readwrite("t_dpo_b", &NoiseModel::t_dpo_b)
        .def_readwrite("t_dph_a", &NoiseModel::t_dph_a)
        .def_readwrite("t_dph_b", &NoiseModel::t_dph_b)
        .def("validate", &NoiseModel::validate);

    m.def("werner_vector", &werner_vector, py::arg("w"));
    m.def("depolarize", &depolarize, py::arg("q"), py::arg("side"), py::arg("lam"));
    m.def("dephase", &dephase, py::arg("q"), py::arg("side"), py::arg("zeta"));
    m.def("apply_memory_noise", &apply_memory_noise, py::arg("q"), py::arg("model"),
          py::arg("dt"));
    m.def("rotate_bilateral_rx", &rotate_bilateral_rx, py::arg("q"), py::arg("m_alice"),
          py::arg("m_bob"));
    m.def("trace_distance", &trace_distance, py::arg("a"), py::arg("b"));

    m.def("noiseless_success", &noiseless_success, py::arg("protocol"), py::arg("q"));
    m.def("noisy_success", &noisy_success, py::arg("protocol"), py::arg("q"),
          py::arg("model"), py::arg("dt"));
    m.def("distilled_fidelity_noiseless", &distilled_fidelity_noiseless, py::arg("q"));
    m.def(
        "quadratic_coefficients",
        [](ProtocolId p, const NoiseModel& model, double dt) {
            const SuccessQuadratic quad = quadratic_coefficients(p, model, dt);
            return std::make_pair(quad.slope, quad.offset);
        },
        py::arg("protocol"), py::arg("model"), py::arg("dt"),
        "Returns (slope, offset) with p(x) = slope*(x^2 - x) + offset");

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("protocol", &ExperimentConfig::protocol)
        .def_readwrite("n_rounds", &ExperimentConfig::n_rounds)
        .def_readwrite("p_g", &ExperimentConfig::p_g)
        .def_readwrite("delay_scale", &ExperimentConfig::delay_scale)
        .def_readwrite("model", &ExperimentConfig::model)
        .def_readwrite("seed", &ExperimentConfig::seed);

    py::class_<ExperimentLog>(m, "ExperimentLog")
        .def(py::init<>())
        .def_readwrite("protocol", &ExperimentLog::protocol)
        .def_readwrite("n_rounds", &ExperimentLog::n_rounds)
        .def_readwrite("n_success", &ExperimentLog::n_success)
        .def_readwrite("delays", &ExperimentLog::delays)
        .def_readwrite("model", &ExperimentLog::model)
        .def("p_hat", &ExperimentLog::p_hat);

    m.def("run_experiment", &run_experiment, py::arg("q_true"), py::arg("config"));
    m.def("expected_statistic", &expected_statistic, py::arg("log"), py::arg("candidate"),
          py::arg("kind"));

    py::class_<StatisticModel>(m, "StatisticModel")
        .def(py::init<const ExperimentLog&>(), py::arg("log"))
        .def("eval_x", &StatisticModel::eval_x, py::arg("x"))
        .def("eval_werner", &StatisticModel::eval_werner, py::arg("w"))
        .def("mean_pair_survival", &StatisticModel::mean_pair_survival);
    m.def("sample_generation_delay", &sample_generation_delay, py::arg("p_g"),
          py::arg("delay_scale"), py::arg("seed"), py::arg("protocol"), py::arg("round"));

    m.def(
        "estimate_werner",
        [](const ExperimentLog& log, double eps_w, double bracket_lo, double bracket_hi) {
            return report_to_dict(
                estimate_werner(log, eps_w, {bracket_lo, bracket_hi}));
        },
        py::arg("log"), py::arg("eps_w"), py::arg("bracket_lo") = 0.0,
        py::arg("bracket_hi") = 2.0 / 3.0);
    m.def(
        "estimate_werner_noiseless",
        [](double p_hat, std::int64_t n, double eps_w) {
            return report_to_dict(estimate_werner_noiseless(p_hat, n, eps_w));
        },
        py::arg("p_hat"), py::arg("n"), py::arg("eps_w"));
    m.def(
        "estimate_werner_depolarized",
        [](double p_hat, double s_avg, std::int64_t n, double eps_w) {
            return report_to_dict(estimate_werner_depolarized(p_hat, s_avg, n, eps_w));
        },
        py::arg("p_hat"), py::arg("s_avg"), py::arg("n"), py::arg("eps_w"));
    m.def(
        "estimate_bell",
        [](const ExperimentLog& a, const ExperimentLog& b, const ExperimentLog& c,
           const std::array<double, 3>& eps) {
            return report_to_dict(estimate_bell(a, b, c, eps));
        },
        py::arg("log_a"), py::arg("log_b"), py::arg("log_c"), py::arg("eps"));
    m.def(
        "estimate_bell_noiseless",
        [](const std::array<double, 3>& p_hats, const std::array<std::int64_t, 3>& ns,
           const std::array<double, 3>& eps) {
            return report_to_dict(estimate_bell_noiseless(p_hats, ns, eps));
        },
        py::arg("p_hats"), py::arg("ns"), py::arg("eps"));

    m.def("x_to_q", &x_to_q, py::arg("x"));
    m.def("hoeffding_tail", &hoeffding_tail, py::arg("n"), py::arg("t"), py::arg("lo"),
          py::arg("hi"));
    m.def("arbitrary_state_bound", &arbitrary_state_bound, py::arg("q"), py::arg("eps_t"));
    m.def("werner_sample_bound", &werner_sample_bound, py::arg("delta"), py::arg("eps_w"));
    m.def("bell_sample_bound", &bell_sample_bound, py::arg("delta"), py::arg("eps_t"),
          py::arg("x_max"));
    m.def("tomography_werner_samples", &tomography_werner_samples, py::arg("delta"),
          py::arg("eps_w"));
    m.def("tomography_werner_delta", &tomography_werner_delta, py::arg("n"),
          py::arg("eps_w"));
    m.def("tomography_bell_delta", &tomography_bell_delta, py::arg("ns"), py::arg("eps"));
    m.def("tomography_bell_up_probs", &tomography_bell_up_probs, py::arg("q"));
    m.def("consumed_pairs",
          py::overload_cast<double, std::int64_t>(&consumed_pairs), py::arg("p"),
          py::arg("n"));
    m.def("werner_required_rounds", &werner_required_rounds, py::arg("w"),
          py::arg("eps_w"), py::arg("delta_target"));
    m.def("bell_required_rounds", &bell_required_rounds, py::arg("x"), py::arg("eps"),
          py::arg("delta_target"));

    m.def("write_log_file", &write_log_file, py::arg("path"), py::arg("log"));
    m.def("read_log_file", &read_log_file, py::arg("path"));

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
