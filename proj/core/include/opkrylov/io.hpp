// Copyright 2026 The opkrylov Authors
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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "opkrylov/analysis.hpp"
#include "opkrylov/dynamics.hpp"
#include "opkrylov/krylov.hpp"
#include "opkrylov/spin_algebra.hpp"

namespace opkrylov {

using Metadata = std::map<std::string, std::string>;

/// `# key: value` header lines, then n,re_a,im_a,re_b,im_b,c. Row n carries a_n and,
/// for n >= 1, b_n and c_n.
void write_coefficients_csv(std::ostream& out, const TridiagonalData& t,
                            const Metadata& metadata = {});
TridiagonalData read_coefficients_csv(std::istream& in, Metadata* metadata = nullptr);

/// t,P,K_raw,K_o.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// t,n,re_phi,im_phi. Needs stored amplitudes.
void write_amplitudes_csv(std::ostream& out, const Trajectory& traj);

nlohmann::json to_json(const SlopeFit& fit);
nlohmann::json to_json(const EtaModel& model);
nlohmann::json to_json(const StabilityReport& report, bool with_eigenvalues = false);
nlohmann::json to_json(std::span<const PauliTerm> terms);

void write_json(const std::filesystem::path& path, const nlohmann::json& value);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace opkrylov
