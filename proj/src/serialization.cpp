#include "qcoin/serialization.hpp"

#include <cstdio>

#include "qcoin/errors.hpp"

namespace qcoin {

namespace {

nlohmann::json pair(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

// Round-trip decimal form.
std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

nlohmann::json to_json(const OutcomeDistribution& dist) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["steps"] = dist.steps();
  for (std::uint32_t i = 0; i < dist.size(); ++i) j[bitstring(i, dist.steps())] = dist[i];
  return j;
}

OutcomeDistribution outcome_distribution_from_json(const nlohmann::json& j) {
  const int steps = j.at("steps").get<int>();
  if (steps < 1 || steps > 20) throw InvalidParameter("steps out of range");
  std::vector<double> p(std::size_t{1} << steps);
  for (std::uint32_t i = 0; i < p.size(); ++i) p[i] = j.at(bitstring(i, steps)).get<double>();
  return {steps, std::move(p)};
}

nlohmann::json to_json(const DensityMatrix2& rho) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int i = 0; i < 2; ++i) {
    re.push_back({rho(i, 0).real(), rho(i, 1).real()});
    im.push_back({rho(i, 0).imag(), rho(i, 1).imag()});
  }
  return {{"real", re}, {"imag", im}};
}

DensityMatrix2 density_matrix_from_json(const nlohmann::json& j) {
  DensityMatrix2::Entries e{};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      e[i][k] = {j.at("real").at(i).at(k).get<double>(), j.at("imag").at(i).at(k).get<double>()};
    }
  }
  return DensityMatrix2(e);
}

nlohmann::json to_json(const IdealOutputState& state) {
  nlohmann::json amplitudes = nlohmann::json::object();
  const std::uint32_t outcomes = 1u << state.steps();
  for (std::uint32_t x = 0; x < outcomes; ++x) {
    amplitudes[bitstring(x, state.steps())] = {pair(state.amplitude(x, 0)),
                                                pair(state.amplitude(x, 1))};
  }
  return {{"schema_version", kSchemaVersion}, {"steps", state.steps()}, {"amplitudes", amplitudes}};
}

nlohmann::json to_json(const PhotonState& state) {
  nlohmann::json bins = nlohmann::json::object();
  for (std::size_t b = 0; b < state.bins(); ++b) {
    bins[std::to_string(b)] = {{"H", pair(state.amplitude(b, Polarization::H))},
                               {"V", pair(state.amplitude(b, Polarization::V))}};
  }
  return {{"schema_version", kSchemaVersion},
          {"steps", state.steps_applied()},
          {"success_probability", state.success_probability()},
          {"bins", bins}};
}

nlohmann::json to_json(const ProcessWithStart& p) {
  return {{"label", p.process.label},
          {"l", p.process.coin.l()},
          {"m", p.process.coin.m()},
          {"start", to_string(p.start)}};
}

nlohmann::json to_json(const VisibilityRecord& record) {
  return {{"overlap", record.overlap},
          {"visibility", record.visibility},
          {"coincidence_min", record.coincidence_min},
          {"process_pair", {to_json(record.first), to_json(record.second)}}};
}

nlohmann::json to_json(const std::vector<VisibilityRecord>& records) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : records) list.push_back(to_json(r));
  return {{"schema_version", kSchemaVersion}, {"records", list}};
}

std::string arrival_times_csv(const ArrivalTimes& arrivals) {
  std::string out = "bitstring,time_ns,probability\n";
  const auto& dist = arrivals.distribution;
  for (std::uint32_t b = 0; b < dist.size(); ++b) {
    out += bitstring(b, dist.steps()) + "," + number(arrivals.times_ns[b]) + "," +
           number(dist[b]) + "\n";
  }
  return out;
}

}  // namespace qcoin
