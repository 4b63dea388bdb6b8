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

#include "clutterpush/bench/report.h"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "clutterpush/errors.h"
#include "clutterpush/random.h"

namespace clutterpush::bench {
namespace {

std::string Hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

ReportRow MakeReportRow(const std::string& label, const EvalOptions& options,
                        const EvalResult& result) {
  return ReportRow{
      .policy = label,
      .uncertainty = std::string(env::UncertaintyName(options.level)),
      .n = options.policy.n,
      .h = options.policy.h,
      .success_rate = result.success_rate,
      .ci = result.ci,
      .avg_time_s = result.avg_seconds,
      .seed = options.seed};
}

std::string FormatReportCsv(std::span<const ReportRow> rows) {
  std::string out = std::string(kReportHeader) + "\n";
  char buf[256];
  for (const auto& r : rows) {
    std::string time;
    if (r.avg_time_s) {
      char t[32];
      std::snprintf(t, sizeof(t), "%.6f", *r.avg_time_s);
      time = t;
    }
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%d,%.6f,%.6f,%s,%llu\n",
                  r.policy.c_str(), r.uncertainty.c_str(), r.n, r.h,
                  r.success_rate, r.ci, time.c_str(),
                  static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

std::vector<ReportRow> ParseReportCsv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != kReportHeader) {
    throw FormatError("report CSV does not start with the expected header");
  }
  std::vector<ReportRow> rows;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 8) throw FormatError("report row needs 8 fields: " + line);
    try {
      ReportRow r;
      r.policy = f[0];
      r.uncertainty = f[1];
      r.n = std::stoi(f[2]);
      r.h = std::stoi(f[3]);
      r.success_rate = std::stod(f[4]);
      r.ci = std::stod(f[5]);
      if (!f[6].empty()) r.avg_time_s = std::stod(f[6]);
      r.seed = std::stoull(f[7]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw FormatError("unparsable report row: " + line);
    }
  }
  return rows;
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

void WriteTextFile(const std::filesystem::path& path,
                   const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot write '" + path.string() + "'");
  os << content;
  if (!os) throw FormatError("failed writing '" + path.string() + "'");
}

std::string TextDigest(const std::string& bytes) {
  return Hex16(Fnv1a64(bytes));
}

std::string FileDigest(const std::filesystem::path& path) {
  return TextDigest(ReadTextFile(path));
}

env::Json MakeManifest(const std::string& command, std::uint64_t seed,
                       env::Json args) {
  return env::Json{{"tool", "clutterpush"},
                   {"version", kToolVersion},
                   {"command", command},
                   {"seed", seed},
                   {"args", std::move(args)},
                   {"digests", env::Json::object()},
                   {"inputs", env::Json::object()},
                   {"outputs", env::Json::object()}};
}

void AddManifestFile(env::Json& manifest, const std::string& section,
                     const std::string& role,
                     const std::filesystem::path& path) {
  manifest[section][role] = {{"path", path.string()},
                             {"digest", FileDigest(path)}};
}

std::filesystem::path ManifestPath(const std::filesystem::path& report) {
  return report.string() + ".manifest.json";
}

void WriteManifest(const env::Json& manifest,
                   const std::filesystem::path& path) {
  WriteTextFile(path, manifest.dump(2) + "\n");
}

env::Json ReadManifest(const std::filesystem::path& path) {
  try {
    env::Json j = env::Json::parse(ReadTextFile(path));
    if (!j.is_object() || j.value("tool", "") != "clutterpush" ||
        !j.contains("command") || !j.contains("args")) {
      throw FormatError("'" + path.string() + "' is not a run manifest");
    }
    return j;
  } catch (const env::Json::exception& e) {
    throw FormatError("malformed manifest '" + path.string() + "': " +
                      e.what());
  }
}

}  // namespace clutterpush::bench
