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

#include "opkrylov/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace opkrylov {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  // from_chars rejects an explicit plus sign
  const char* begin = value.data() + (value.size() > 1 && value[0] == '+' ? 1 : 0);
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw DomainError("config key '" + key + "': '" + value + "' is not a number");
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& value) {
  long long out = 0;
  const char* begin = value.data() + (value.size() > 1 && value[0] == '+' ? 1 : 0);
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw DomainError("config key '" + key + "': '" + value + "' is not an integer");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw DomainError("config key '" + key + "': expected true or false, got '" + value + "'");
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Field {
  bool scalar;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Field real_field(T ExperimentConfig::*member) {
  return {true,
          [member](ExperimentConfig& c, const std::string& k, const std::string& v) {
            c.*member = to_double(k, v);
          },
          [member](const ExperimentConfig& c) { return format_double(c.*member); }};
}

template <class T>
Field int_field(T ExperimentConfig::*member) {
  return {true,
          [member](ExperimentConfig& c, const std::string& k, const std::string& v) {
            c.*member = static_cast<T>(to_integer(k, v));
          },
          [member](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

Field bool_field(std::function<bool&(ExperimentConfig&)> ref) {
  return {false,
          [ref](ExperimentConfig& c, const std::string& k, const std::string& v) {
            ref(c) = to_bool(k, v);
          },
          [ref](const ExperimentConfig& c) {
            return std::string(ref(const_cast<ExperimentConfig&>(c)) ? "true" : "false");
          }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> t;
    t["name"] = {false, [](ExperimentConfig& c, const std::string&, const std::string& v) { c.name = v; },
                 [](const ExperimentConfig& c) { return c.name; }};
    t["model"] = {false,
                  [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                    if (v == "tfim") {
                      c.model = ModelKind::Tfim;
                    } else if (v == "xxz") {
                      c.model = ModelKind::Xxz;
                    } else {
                      throw DomainError("config key '" + k + "': unknown model '" + v + "'");
                    }
                  },
                  [](const ExperimentConfig& c) { return std::string(model_label(c.model)); }};
    t["sites"] = int_field(&ExperimentConfig::num_sites);
    t["g"] = real_field(&ExperimentConfig::g);
    t["h"] = real_field(&ExperimentConfig::h);
    t["J"] = real_field(&ExperimentConfig::J);
    t["Jzz"] = real_field(&ExperimentConfig::Jzz);
    t["epsilon"] = real_field(&ExperimentConfig::epsilon);
    t["defect_site"] = int_field(&ExperimentConfig::defect_site);
    t["alpha"] = real_field(&ExperimentConfig::alpha);
    t["gamma"] = real_field(&ExperimentConfig::gamma);
    t["sector"] = {false,
                   [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                     if (v == "none") {
                       c.sector.reset();
                       return;
                     }
                     const auto comma = v.find(',');
                     if (comma == std::string::npos) {
                       throw DomainError("config key '" + k + "': expected 'S,P' or 'none'");
                     }
                     const double spin = to_double(k, trim(v.substr(0, comma)));
                     const auto parity = to_integer(k, trim(v.substr(comma + 1)));
                     const double twice = 2.0 * spin;
                     if (std::abs(twice - std::round(twice)) > 1e-12 ||
                         (parity != 1 && parity != -1)) {
                       throw DomainError("config key '" + k + "': invalid sector '" + v + "'");
                     }
                     c.sector = SectorLabel{static_cast<int>(std::lround(twice)),
                                            static_cast<int>(parity)};
                   },
                   [](const ExperimentConfig& c) {
                     if (!c.sector) return std::string("none");
                     return format_double(c.sector->spin()) + "," +
                            std::to_string(c.sector->parity);
                   }};
    t["jump_form"] = {false,
                      [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                        if (v == "auto") {
                          c.jump_form.reset();
                        } else if (v == "as_written") {
                          c.jump_form = JumpForm::AsWritten;
                        } else if (v == "reflection_symmetric") {
                          c.jump_form = JumpForm::ReflectionSymmetric;
                        } else {
                          throw DomainError("config key '" + k + "': unknown jump form '" + v + "'");
                        }
                      },
                      [](const ExperimentConfig& c) {
                        if (!c.jump_form) return std::string("auto");
                        return std::string(*c.jump_form == JumpForm::AsWritten
                                               ? "as_written"
                                               : "reflection_symmetric");
                      }};
    t["seed"] = {false, [](ExperimentConfig& c, const std::string&, const std::string& v) { c.seed = v; },
                 [](const ExperimentConfig& c) { return c.seed; }};
    t["max_steps"] = {true,
                      [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                        c.iteration.max_steps = static_cast<Index>(to_integer(k, v));
                      },
                      [](const ExperimentConfig& c) { return std::to_string(c.iteration.max_steps); }};
    t["breakdown_tol"] = {true,
                          [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                            c.iteration.breakdown_tol = to_double(k, v);
                          },
                          [](const ExperimentConfig& c) {
                            return format_double(c.iteration.breakdown_tol);
                          }};
    t["reorth"] = {false,
                   [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                     if (v == "full") {
                       c.iteration.reorth = Reorthogonalization::Full;
                     } else if (v == "none") {
                       c.iteration.reorth = Reorthogonalization::None;
                     } else {
                       throw DomainError("config key '" + k + "': expected full or none");
                     }
                   },
                   [](const ExperimentConfig& c) {
                     return std::string(c.iteration.reorth == Reorthogonalization::Full ? "full"
                                                                                         : "none");
                   }};
    t["preserve_hermiticity"] =
        bool_field([](ExperimentConfig& c) -> bool& { return c.iteration.preserve_hermiticity; });
    t["preserve_trace"] =
        bool_field([](ExperimentConfig& c) -> bool& { return c.iteration.preserve_trace; });
    t["store_bases"] =
        bool_field([](ExperimentConfig& c) -> bool& { return c.iteration.store_bases; });
    t["memory_cap_mb"] = {true,
                          [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                            const auto mb = to_integer(k, v);
                            if (mb <= 0) throw DomainError("memory_cap_mb must be positive");
                            c.iteration.memory_cap_bytes = static_cast<std::size_t>(mb) << 20;
                          },
                          [](const ExperimentConfig& c) {
                            return std::to_string(c.iteration.memory_cap_bytes >> 20);
                          }};
    t["t_max"] = real_field(&ExperimentConfig::t_max);
    t["grid_points"] = int_field(&ExperimentConfig::grid_points);
    t["linear_end"] = real_field(&ExperimentConfig::linear_end);
    t["linear_points"] = int_field(&ExperimentConfig::linear_points);
    t["rel_tol"] = {true,
                    [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                      c.integrator.rel_tol = to_double(k, v);
                    },
                    [](const ExperimentConfig& c) { return format_double(c.integrator.rel_tol); }};
    t["abs_tol"] = {true,
                    [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                      c.integrator.abs_tol = to_double(k, v);
                    },
                    [](const ExperimentConfig& c) { return format_double(c.integrator.abs_tol); }};
    t["offdiagonal"] = {false,
                        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
                          if (v == "signed") {
                            c.integrator.offdiagonal = OffdiagonalSign::Signed;
                          } else if (v == "magnitude") {
                            c.integrator.offdiagonal = OffdiagonalSign::Magnitude;
                          } else {
                            throw DomainError("config key '" + k + "': expected signed or magnitude");
                          }
                        },
                        [](const ExperimentConfig& c) {
                          return std::string(c.integrator.offdiagonal == OffdiagonalSign::Signed
                                                 ? "signed"
                                                 : "magnitude");
                        }};
    t["store_amplitudes"] =
        bool_field([](ExperimentConfig& c) -> bool& { return c.integrator.store_amplitudes; });
    t["saturation_window"] = real_field(&ExperimentConfig::saturation_window);
    t["smoothing_window"] = int_field(&ExperimentConfig::smoothing_window);
    t["outlier_multiplier"] = real_field(&ExperimentConfig::outlier_multiplier);
    t["support_profiles"] =
        bool_field([](ExperimentConfig& c) -> bool& { return c.support_profiles; });
    t["export_superoperator"] =
        bool_field([](ExperimentConfig& c) -> bool& { return c.export_superoperator; });
    return t;
  }();
  return table;
}

}  // namespace

const char* model_label(ModelKind kind) { return kind == ModelKind::Tfim ? "tfim" : "xxz"; }

void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
  const auto it = fields().find(key);
  if (it == fields().end()) throw DomainError("unknown config key '" + key + "'");
  it->second.set(config, key, value);
}

bool is_scalar_key(const std::string& key) {
  const auto it = fields().find(key);
  return it != fields().end() && it->second.scalar;
}

std::map<std::string, std::string> config_values(const ExperimentConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& [key, field] : fields()) out[key] = field.get(config);
  out["seed"] = effective_seed(config);
  return out;
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(number) + ": expected key = value");
    }
    set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config " + path.string());
  return parse_config(in);
}

void validate(const ExperimentConfig& c) {
  if (c.num_sites < 1 || c.num_sites > kMaxSites) {
    throw DomainError("sites must be in [1, " + std::to_string(kMaxSites) + "]");
  }
  if (c.alpha < 0.0 || c.gamma < 0.0) throw DomainError("dissipation rates must be non-negative");
  if (c.model == ModelKind::Tfim && c.sector) {
    throw DomainError("symmetry sectors are only supported for the xxz model");
  }
  if (c.model == ModelKind::Tfim && c.jump_form) {
    throw DomainError("jump_form applies to the xxz model only");
  }
  if (c.sector && c.jump_form && *c.jump_form != JumpForm::ReflectionSymmetric) {
    throw DomainError("sector runs need reflection_symmetric jumps");
  }
  if (c.model == ModelKind::Xxz && c.num_sites < 2) throw DomainError("xxz needs at least 2 sites");
  if (c.defect_site < 0 || c.defect_site > c.num_sites) throw DomainError("defect_site out of range");
  if (c.t_max <= c.linear_end || c.grid_points <= c.linear_points || c.linear_points < 1) {
    throw DomainError("inconsistent time grid settings");
  }
  if (!(c.saturation_window > 0.0 && c.saturation_window <= 1.0)) {
    throw DomainError("saturation_window must be in (0, 1]");
  }
  if (c.smoothing_window < 1 || c.smoothing_window % 2 == 0) {
    throw DomainError("smoothing_window must be a positive odd integer");
  }
  if (!(c.outlier_multiplier > 1.0)) throw DomainError("outlier_multiplier must exceed 1");
  if (c.iteration.max_steps < 0) throw DomainError("max_steps must be non-negative");
  parse_operator_spec(effective_seed(c), c.num_sites);
}

std::string effective_seed(const ExperimentConfig& config) {
  if (!config.seed.empty()) return config.seed;
  return "z" + std::to_string((config.num_sites + 1) / 2);
}

SpinOperator parse_operator_spec(const std::string& spec, int num_sites) {
  if (spec.empty()) throw DomainError("empty operator spec");
  std::optional<SpinOperator> total;
  std::stringstream terms(spec);
  std::string term;
  while (std::getline(terms, term, '+')) {
    term = trim(term);
    if (term.empty()) throw DomainError("operator spec '" + spec + "' has an empty term");
    std::vector<std::pair<int, PauliAxis>> factors;
    std::stringstream parts(term);
    std::string factor;
    while (std::getline(parts, factor, '*')) {
      factor = trim(factor);
      if (factor.size() < 2) throw DomainError("bad operator factor '" + factor + "'");
      PauliAxis axis;
      switch (factor[0]) {
        case 'x': axis = PauliAxis::X; break;
        case 'y': axis = PauliAxis::Y; break;
        case 'z': axis = PauliAxis::Z; break;
        case 'p': axis = PauliAxis::Plus; break;
        case 'm': axis = PauliAxis::Minus; break;
        default: throw DomainError("bad operator axis in '" + factor + "'");
      }
      const auto site = to_integer("seed", factor.substr(1));
      if (site < 1 || site > num_sites) throw DomainError("operator site out of range in '" + spec + "'");
      factors.emplace_back(static_cast<int>(site), axis);
    }
    SpinOperator op = build_pauli_operator(PauliString::product(num_sites, factors));
    total = total ? *total + op : op;
  }
  return *total;
}

}  // namespace opkrylov
