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

#include "opkrylov/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace opkrylov {

namespace {

class PrecisionGuard {
 public:
  explicit PrecisionGuard(std::ostream& out) : out_(out), old_(out.precision(17)) {}
  ~PrecisionGuard() { out_.precision(old_); }

 private:
  std::ostream& out_;
  std::streamsize old_;
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw DomainError("malformed number '" + s + "'");
  return v;
}

}  // namespace

void write_coefficients_csv(std::ostream& out, const TridiagonalData& t, const Metadata& metadata) {
  PrecisionGuard guard(out);
  for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << '\n';
  out << "# krylov_dim: " << t.krylov_dim() << '\n';
  out << "# termination: " << termination_label(t.termination) << '\n';
  out << "n,re_a,im_a,re_b,im_b,c\n";
  for (Index n = 0; n < t.krylov_dim(); ++n) {
    out << n << ',' << t.a[n].real() << ',' << t.a[n].imag();
    if (n == 0) {
      out << ",,,";
    } else {
      out << ',' << t.b[n - 1].real() << ',' << t.b[n - 1].imag() << ',' << t.c[n - 1];
    }
    out << '\n';
  }
}

TridiagonalData read_coefficients_csv(std::istream& in, Metadata* metadata) {
  TridiagonalData t;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = line.substr(2, colon - 2);
      const std::string value = line.substr(colon + 2);
      if (key == "termination") {
        if (value == "breakdown") t.termination = Termination::Breakdown;
        if (value == "max_steps") t.termination = Termination::MaxSteps;
        if (value == "dimension_bound") t.termination = Termination::DimensionBound;
      } else if (metadata != nullptr && key != "krylov_dim") {
        (*metadata)[key] = value;
      }
      continue;
    }
    if (!header) {
      header = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 6) throw DomainError("malformed coefficient row '" + line + "'");
    t.a.emplace_back(parse_double(cells[1]), parse_double(cells[2]));
    if (!cells[3].empty()) {
      t.b.emplace_back(parse_double(cells[3]), parse_double(cells[4]));
      t.c.push_back(parse_double(cells[5]));
    }
  }
  if (t.b.size() + 1 != t.a.size() && !t.a.empty()) {
    throw DomainError("coefficient file has inconsistent row count");
  }
  return t;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  PrecisionGuard guard(out);
  out << "t,P,K_raw,K_o\n";
  for (Index i = 0; i < traj.size(); ++i) {
    out << traj.t[i] << ',' << traj.P[i] << ',' << traj.K_raw[i] << ',';
    if (std::isnan(traj.K_o[i])) {
      out << "nan";
    } else {
      out << traj.K_o[i];
    }
    out << '\n';
  }
}

void write_amplitudes_csv(std::ostream& out, const Trajectory& traj) {
  if (traj.phi.rows() != traj.size()) throw DomainError("trajectory has no stored amplitudes");
  PrecisionGuard guard(out);
  out << "t,n,re_phi,im_phi\n";
  for (Index i = 0; i < traj.size(); ++i) {
    for (Index n = 0; n < traj.phi.cols(); ++n) {
      const Complex v = traj.phi(i, n);
      out << traj.t[i] << ',' << n << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
}

nlohmann::json to_json(const SlopeFit& fit) {
  return {{"eta", fit.eta},
          {"k", fit.k},
          {"fit_range", {fit.fit_range.begin, fit.fit_range.end}},
          {"r_squared", fit.r_squared},
          {"eta_zero_offset", fit.eta_zero_offset},
          {"r_squared_zero_offset", fit.r_squared_zero_offset}};
}

nlohmann::json to_json(const EtaModel& model) {
  nlohmann::json points = nlohmann::json::array();
  for (const EtaPoint& p : model.points) {
    points.push_back({{"alpha", p.alpha}, {"gamma", p.gamma}, {"eta", p.eta}});
  }
  return {{"c1", model.c1},
          {"c2", model.c2},
          {"residual", model.residual},
          {"r_squared", model.r_squared},
          {"points", points}};
}

nlohmann::json to_json(const StabilityReport& report, bool with_eigenvalues) {
  nlohmann::json out = {{"max_real_part", report.max_real_part},
                        {"stable", report.stable},
                        {"conjugate_pairs", report.conjugate_pairs},
                        {"threshold", report.threshold},
                        {"eigenvalue_count", report.eigenvalues.size()}};
  if (with_eigenvalues) {
    nlohmann::json eig = nlohmann::json::array();
    for (const Complex& z : report.eigenvalues) eig.push_back({z.real(), z.imag()});
    out["eigenvalues"] = eig;
  }
  return out;
}

nlohmann::json to_json(std::span<const PauliTerm> terms) {
  nlohmann::json out = nlohmann::json::array();
  for (const PauliTerm& term : terms) {
    std::string label;
    for (PauliAxis axis : term.factors) label += axis_label(axis);
    out.push_back({{"string", label},
                   {"re", term.coefficient.real()},
                   {"im", term.coefficient.imag()},
                   {"support", term.support_size()}});
  }
  return out;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  write_text(path, value.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace opkrylov
