#pragma once

#include <iosfwd>
#include <string>

#include "distimator/experiment.hpp"

namespace distimator {

// distimator-log v1: line-oriented UTF-8 text.
//   # distimator-log v1
//   # model <json>
//   protocol,n_rounds,n_success
//   <one delay per line, 17 significant digits>
// The model line carries the NoiseModel snapshot needed for offline
// estimation; infinite characteristic times serialize as the string "inf".

void write_log(std::ostream& os, const ExperimentLog& log);
void write_log_file(const std::string& path, const ExperimentLog& log);

ExperimentLog read_log(std::istream& is);
ExperimentLog read_log_file(const std::string& path);

std::string model_to_json_string(const NoiseModel& model);
NoiseModel model_from_json_string(const std::string& text);

}  // namespace distimator
