#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qcoin/circuit.hpp"
#include "qcoin/interference.hpp"
#include "qcoin/markov.hpp"
#include "qcoin/quantum_model.hpp"

namespace qcoin {

inline constexpr int kSchemaVersion = 1;

// {"schema_version", "steps", "<bitstring>": probability, ...}
nlohmann::json to_json(const OutcomeDistribution& dist);
OutcomeDistribution outcome_distribution_from_json(const nlohmann::json& j);

// {"real": [[..],[..]], "imag": [[..],[..]]}
nlohmann::json to_json(const DensityMatrix2& rho);
DensityMatrix2 density_matrix_from_json(const nlohmann::json& j);

// {"steps", "amplitudes": {"<bitstring>": [[re, im] for memory 0, [re, im] for memory 1]}}
nlohmann::json to_json(const IdealOutputState& state);

// {"steps", "success_probability", "bins": {"<bin>": {"H": [re, im], "V": [re, im]}}}
nlohmann::json to_json(const PhotonState& state);

nlohmann::json to_json(const ProcessWithStart& p);
nlohmann::json to_json(const VisibilityRecord& record);
nlohmann::json to_json(const std::vector<VisibilityRecord>& records);

// Columns bitstring,time_ns,probability; one row per time bin.
std::string arrival_times_csv(const ArrivalTimes& arrivals);

}  // namespace qcoin
