// Copyright 2026 The qconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Run manifests: a JSON record written next to every CLI output so a run can
// be replayed and its outputs checked byte for byte.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace qconv::cli {

struct OutputRecord {
    std::string path; // relative to the output directory
    std::uintmax_t bytes = 0;
    std::string fnv1a64;
};

struct RunManifest {
    std::string subcommand;
    std::vector<std::string> argv; // without the program name and --out
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json seeds = nlohmann::json::object();
    std::string version;
    std::vector<OutputRecord> outputs;
};

std::string fnv1a64_file(const std::filesystem::path &path);

OutputRecord record_output(const std::filesystem::path &dir, const std::string &name);

nlohmann::json to_json(const RunManifest &manifest);
RunManifest manifest_from_json(const nlohmann::json &doc);

void write_manifest(const RunManifest &manifest, const std::filesystem::path &path);
RunManifest read_manifest(const std::filesystem::path &path);

/// Drops "--out <dir>" and "--out=<dir>" from an argument list.
std::vector<std::string> strip_out_flag(const std::vector<std::string> &args);

} // namespace qconv::cli
