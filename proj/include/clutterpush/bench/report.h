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

#ifndef CLUTTERPUSH_BENCH_REPORT_H_
#define CLUTTERPUSH_BENCH_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clutterpush/bench/evaluate.h"
#include "clutterpush/env/serialization.h"

namespace clutterpush::bench {

// Report CSV columns, in order:
//   policy        KDP, GP, RHP-<n><h>; "+RL" suffix for RL-refined weights
//   uncertainty   none, low, med, high
//   n, h          roll-outs and depth (GP: 1, 0; KDP: 0, 0)
//   success_rate  fraction of successful episodes
//   ci            standard error of 20-instance batch success rates
//   avg_time_s    mean seconds per successful episode; empty when timing is
//                 off or nothing succeeded
//   seed          evaluation seed
inline constexpr char kReportHeader[] =
    "policy,uncertainty,n,h,success_rate,ci,avg_time_s,seed";

struct ReportRow {
  std::string policy;
  std::string uncertainty;
  int n = 0;
  int h = 0;
  double success_rate = 0.0;
  double ci = 0.0;
  std::optional<double> avg_time_s;
  std::uint64_t seed = 0;
};

ReportRow MakeReportRow(const std::string& label, const EvalOptions& options,
                        const EvalResult& result);

std::string FormatReportCsv(std::span<const ReportRow> rows);
std::vector<ReportRow> ParseReportCsv(const std::string& text);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path,
                   const std::string& content);

// 16 hex digits of FNV-1a over the bytes.
std::string TextDigest(const std::string& bytes);
std::string FileDigest(const std::filesystem::path& path);

// Run manifest schema:
//   {"tool": "clutterpush", "version": "<semver>", "command": "<name>",
//    "seed": uint, "args": {...command arguments...},
//    "digests": {"sim": hex, "<config>": hex, ...},
//    "inputs": {"<role>": {"path": str, "digest": hex}, ...},
//    "outputs": {"<role>": {"path": str, "digest": hex}, ...}}
// Written next to each report as "<report>.manifest.json".
inline constexpr char kToolVersion[] = "1.0.0";

env::Json MakeManifest(const std::string& command, std::uint64_t seed,
                       env::Json args);
void AddManifestFile(env::Json& manifest, const std::string& section,
                     const std::string& role,
                     const std::filesystem::path& path);
std::filesystem::path ManifestPath(const std::filesystem::path& report);
void WriteManifest(const env::Json& manifest,
                   const std::filesystem::path& path);
env::Json ReadManifest(const std::filesystem::path& path);

}  // namespace clutterpush::bench

#endif  // CLUTTERPUSH_BENCH_REPORT_H_
