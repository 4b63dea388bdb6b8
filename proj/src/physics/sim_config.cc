// Copyright 2026 The Clutterpush Authors
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

#include "clutterpush/physics/sim_config.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "clutterpush/errors.h"
#include "clutterpush/random.h"

namespace clutterpush::physics {
namespace {

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double ParseDouble(std::string_view key, std::string_view value) {
  // std::from_chars for double is available in libstdc++ 11.
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                   out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw FormatError("sim config: bad value for '" + std::string(key) +
                      "': '" + std::string(value) + "'");
  }
  return out;
}

int ParseInt(std::string_view key, std::string_view value) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                   out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw FormatError("sim config: bad integer for '" + std::string(key) +
                      "': '" + std::string(value) + "'");
  }
  return out;
}

// Distance covered by a free body whose speed starts at v0 and is multiplied
// by q before every position update: v0 * dt * sum_{k>=1} q^k.
double GeometricTravelFactor(double q, double dt) { return dt * q / (1.0 - q); }

}  // namespace

std::string SimConfig::ToKeyValue() const {
  std::ostringstream os;
  os << "dt = " << FormatDouble(dt) << "\n"
     << "damping_lin = " << FormatDouble(damping_lin) << "\n"
     << "damping_ang = " << FormatDouble(damping_ang) << "\n"
     << "impulse_lin = " << FormatDouble(impulse_lin) << "\n"
     << "impulse_ang = " << FormatDouble(impulse_ang) << "\n"
     << "v_rest = " << FormatDouble(v_rest) << "\n"
     << "w_rest = " << FormatDouble(w_rest) << "\n"
     << "max_substeps = " << max_substeps << "\n"
     << "penetration_tolerance = " << FormatDouble(penetration_tolerance)
     << "\n"
     << "gravity = " << FormatDouble(gravity) << "\n"
     << "velocity_iterations = " << velocity_iterations << "\n"
     << "position_iterations = " << position_iterations << "\n";
  return os.str();
}

SimConfig SimConfig::FromKeyValue(std::string_view text) {
  SimConfig c;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = Trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{}
                                         : text.substr(eol + 1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("sim config: missing '=' in line '" +
                        std::string(line) + "'");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (key == "dt") c.dt = ParseDouble(key, value);
    else if (key == "damping_lin") c.damping_lin = ParseDouble(key, value);
    else if (key == "damping_ang") c.damping_ang = ParseDouble(key, value);
    else if (key == "impulse_lin") c.impulse_lin = ParseDouble(key, value);
    else if (key == "impulse_ang") c.impulse_ang = ParseDouble(key, value);
    else if (key == "v_rest") c.v_rest = ParseDouble(key, value);
    else if (key == "w_rest") c.w_rest = ParseDouble(key, value);
    else if (key == "max_substeps") c.max_substeps = ParseInt(key, value);
    else if (key == "penetration_tolerance")
      c.penetration_tolerance = ParseDouble(key, value);
    else if (key == "gravity") c.gravity = ParseDouble(key, value);
    else if (key == "velocity_iterations")
      c.velocity_iterations = ParseInt(key, value);
    else if (key == "position_iterations")
      c.position_iterations = ParseInt(key, value);
    else
      throw FormatError("sim config: unknown key '" + std::string(key) + "'");
  }
  return c;
}

std::string SimConfig::Digest() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(ToKeyValue())));
  return buf;
}

void CalibrateImpulses(SimConfig& config, const BodySpec& effector) {
  const double q_lin = std::exp(-config.damping_lin * config.dt);
  const double q_ang = std::exp(-config.damping_ang * config.dt);
  const double v0 = kFreeTravel / GeometricTravelFactor(q_lin, config.dt);
  const double w0 = kFreeTurn / GeometricTravelFactor(q_ang, config.dt);
  config.impulse_lin = effector.Mass() * v0;
  config.impulse_ang = effector.Inertia() * w0;
}

SimConfig DefaultSimConfig() {
  SimConfig c;
  CalibrateImpulses(c, ReferenceEndEffector());
  return c;
}

}  // namespace clutterpush::physics
