#pragma once

// JSON and CSV encodings of library results used by the command-line tool.
// Objects keep insertion order so that reruns produce identical bytes.

#include <string>

#include "json.hpp"

#include "qcorr/qcorr.hpp"

namespace qcorr::cli {

using Json = nlohmann::ordered_json;

// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

Json to_json(const Bloch& v);
// {"real": [[...]], "imag": [[...]]}, row-major.
Json to_json(const ComplexMatrix& m);
Json to_json(const Eigen::Matrix4d& m);

// Nested arrays table[i][j][a][b], matching JointDistribution::index.
Json to_json(const JointDistribution& dist);
Json to_json(const BoundReport& report);
Json to_json(const WitnessResult& result);
Json to_json(const SettingPair& settings);
Json to_json(const MixtureWeights& weights);
Json to_json(const Reconstruction& reconstruction);

}  // namespace qcorr::cli
