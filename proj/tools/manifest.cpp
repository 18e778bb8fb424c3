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

#include "manifest.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>

#include "qconv/error.hpp"

namespace qconv::cli {

std::string fnv1a64_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::InvalidParameter, "cannot read " + path.string());
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
        h ^= static_cast<unsigned char>(*it);
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

OutputRecord record_output(const std::filesystem::path &dir, const std::string &name) {
    const auto full = dir / name;
    return {name, std::filesystem::file_size(full), fnv1a64_file(full)};
}

nlohmann::json to_json(const RunManifest &m) {
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto &o : m.outputs) {
        outputs.push_back({{"path", o.path}, {"bytes", o.bytes}, {"fnv1a64", o.fnv1a64}});
    }
    return {{"tool", "qconv"},     {"version", m.version}, {"subcommand", m.subcommand},
            {"argv", m.argv},      {"params", m.params},   {"seeds", m.seeds},
            {"outputs", outputs}};
}

RunManifest manifest_from_json(const nlohmann::json &doc) {
    try {
        RunManifest m;
        m.subcommand = doc.at("subcommand").get<std::string>();
        m.argv = doc.at("argv").get<std::vector<std::string>>();
        m.params = doc.value("params", nlohmann::json::object());
        m.seeds = doc.value("seeds", nlohmann::json::object());
        m.version = doc.value("version", "");
        for (const auto &o : doc.at("outputs")) {
            m.outputs.push_back({o.at("path").get<std::string>(),
                                 o.at("bytes").get<std::uintmax_t>(),
                                 o.at("fnv1a64").get<std::string>()});
        }
        return m;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::FormatError, std::string("bad manifest: ") + e.what());
    }
}

void write_manifest(const RunManifest &manifest, const std::filesystem::path &path) {
    std::ofstream out(path);
    out << to_json(manifest).dump(2) << '\n';
    if (!out) {
        fail(ErrorKind::InvalidParameter, "cannot write " + path.string());
    }
}

RunManifest read_manifest(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::InvalidParameter, "cannot read " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::FormatError, std::string("bad manifest: ") + e.what());
    }
    return manifest_from_json(doc);
}

std::vector<std::string> strip_out_flag(const std::vector<std::string> &args) {
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out") {
            ++i;
        } else if (args[i].rfind("--out=", 0) != 0) {
            kept.push_back(args[i]);
        }
    }
    return kept;
}

} // namespace qconv::cli
