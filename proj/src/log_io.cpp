#include "distimator/log_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace distimator {

namespace {

constexpr const char* kHeader = "# distimator-log v1";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json time_to_json(double t) {
    if (std::isinf(t)) return "inf";
    return t;
}

double time_from_json(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw std::runtime_error(std::string("bad characteristic time for ") + key);
    }
    return v.get<double>();
}

}  // namespace

std::string model_to_json_string(const NoiseModel& model) {
    nlohmann::json j;
    j["lambda_a"] = model.alice.lambda;
    j["lambda_b"] = model.bob.lambda;
    j["zeta_a"] = model.alice.zeta;
    j["zeta_b"] = model.bob.zeta;
    j["m_a"] = model.alice.m;
    j["m_b"] = model.bob.m;
    j["y_a"] = model.alice.y;
    j["y_b"] = model.bob.y;
    j["eta_z_a"] = model.alice.eta_z;
    j["eta_z_b"] = model.bob.eta_z;
    j["eta_x_a"] = model.alice.eta_x;
    j["eta_x_b"] = model.bob.eta_x;
    j["t_dpo_a"] = time_to_json(model.t_dpo_a);
    j["t_dpo_b"] = time_to_json(model.t_dpo_b);
    j["t_dph_a"] = time_to_json(model.t_dph_a);
    j["t_dph_b"] = time_to_json(model.t_dph_b);
    return j.dump();
}

NoiseModel model_from_json_string(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    NoiseModel m;
    m.alice.lambda = j.at("lambda_a").get<double>();
    m.bob.lambda = j.at("lambda_b").get<double>();
    m.alice.zeta = j.at("zeta_a").get<double>();
    m.bob.zeta = j.at("zeta_b").get<double>();
    m.alice.m = j.at("m_a").get<double>();
    m.bob.m = j.at("m_b").get<double>();
    m.alice.y = j.at("y_a").get<double>();
    m.bob.y = j.at("y_b").get<double>();
    m.alice.eta_z = j.at("eta_z_a").get<double>();
    m.bob.eta_z = j.at("eta_z_b").get<double>();
    m.alice.eta_x = j.at("eta_x_a").get<double>();
    m.bob.eta_x = j.at("eta_x_b").get<double>();
    m.t_dpo_a = time_from_json(j, "t_dpo_a");
    m.t_dpo_b = time_from_json(j, "t_dpo_b");
    m.t_dph_a = time_from_json(j, "t_dph_a");
    m.t_dph_b = time_from_json(j, "t_dph_b");
    m.validate();
    return m;
}

void write_log(std::ostream& os, const ExperimentLog& log) {
    log.validate();
    os << kHeader << "\n";
    os << "# model " << model_to_json_string(log.model) << "\n";
    os << protocol_tag(log.protocol) << "," << log.n_rounds << "," << log.n_success
       << "\n";
    for (double dt : log.delays) os << fmt(dt) << "\n";
}

void write_log_file(const std::string& path, const ExperimentLog& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_log(out, log);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

ExperimentLog read_log(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kHeader) {
        throw std::runtime_error("missing 'distimator-log v1' header");
    }
    ExperimentLog log;
    bool have_model = false;
    bool have_counts = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# model ", 0) == 0) {
            log.model = model_from_json_string(line.substr(8));
            have_model = true;
            continue;
        }
        if (line[0] == '#') continue;
        if (!have_counts) {
            std::istringstream fields(line);
            std::string tag, rounds, successes;
            if (!std::getline(fields, tag, ',') || !std::getline(fields, rounds, ',') ||
                !std::getline(fields, successes) || tag.size() != 1) {
                throw std::runtime_error("malformed counts line: " + line);
            }
            log.protocol = protocol_from_tag(tag[0]);
            log.n_rounds = std::stoll(rounds);
            log.n_success = std::stoll(successes);
            log.delays.reserve(static_cast<std::size_t>(log.n_rounds));
            have_counts = true;
            continue;
        }
        log.delays.push_back(std::stod(line));
    }
    if (!have_model || !have_counts) {
        throw std::runtime_error("log file lacks model or counts line");
    }
    log.validate();
    return log;
}

ExperimentLog read_log_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return read_log(in);
}

}  // namespace distimator
