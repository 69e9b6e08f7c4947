// Copyright 2026 The phasefe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "phasefe/linalg.hpp"
#include "phasefe/states.hpp"

/// @file io.hpp
/// @brief JSON serialization of states: {"n": n, "amplitudes": [[re, im], ...]} for pure states
/// and {"n": n, "matrix": [[[re, im], ...], ...]} for density matrices.

namespace phasefe {

inline nlohmann::json to_json(const StateVector &s) {
    nlohmann::json amps = nlohmann::json::array();
    for (const auto &a : s.amplitudes()) amps.push_back({a.real(), a.imag()});
    return {{"n", s.n()}, {"amplitudes", amps}};
}

inline nlohmann::json to_json(const ComplexMatrix &m, int n) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.dim(); i++) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.dim(); j++) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return {{"n", n}, {"matrix", rows}};
}

inline nlohmann::json to_json(const DensityState &rho) {
    return to_json(rho.to_dense(), rho.n());
}

inline StateVector state_from_json(const nlohmann::json &j) {
    int n = j.at("n").get<int>();
    std::vector<cplx> amps;
    for (const auto &a : j.at("amplitudes")) amps.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    return StateVector::from_amplitudes(n, std::move(amps), false);
}

inline DensityState density_from_json(const nlohmann::json &j) {
    int n = j.at("n").get<int>();
    if (j.contains("amplitudes")) return DensityState::pure(state_from_json(j));
    const auto &rows = j.at("matrix");
    ComplexMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); i++)
        for (std::size_t k = 0; k < rows[i].size(); k++) m(i, k) = {rows[i][k].at(0).get<double>(), rows[i][k].at(1).get<double>()};
    return DensityState::dense(n, std::move(m));
}

inline void save_json(const std::string &path, const nlohmann::json &j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << j.dump() << "\n";
}

inline nlohmann::json load_json(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(f);
}

}  // namespace phasefe
