#pragma once

#include "secdist/channel.hpp"
#include "secdist/dist.hpp"
#include "secdist/protocol.hpp"

#include <json.hpp>

#include <string>

namespace secdist::io {

using ordered_json = nlohmann::ordered_json;

// Distribution files:
//   { "variables": [ { "name": "A", "alphabet": ["0","1"], "owner": "alice" }, ... ],
//     "entries":   [ { "outcome": ["0","0","0","e0"], "p": "1/6" }, ... ] }
// Probabilities are rational strings; omitted outcomes are 0.
ordered_json dist_to_json(const JointDistribution& d);
JointDistribution dist_from_json(const nlohmann::json& j);
JointDistribution load_distribution(const std::string& path);
void save_distribution(const JointDistribution& d, const std::string& path);

// Witness channel files:
//   { "input": [...], "output": [...], "rows": { "f0": { "e0": "1" }, ... } }
// Rows are keyed by input symbol; omitted cells are 0.
ordered_json channel_to_json(const Channel& ch);
Channel channel_from_json(const nlohmann::json& j);
Channel load_witness(const std::string& path);

ordered_json trace_to_json(const ProtocolTrace& trace);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// FNV-1a 64 content digest used for the report inputs block.
std::string file_digest_hex(const std::string& path);

} // namespace secdist::io
