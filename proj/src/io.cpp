#include "secdist/io.hpp"

#include "secdist/errors.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace secdist::io {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::parse_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::parse_error, "cannot write '" + path + "'");
  out << contents;
}

std::string file_digest_hex(const std::string& path) {
  const std::string bytes = read_file(path);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a:") + buf;
}

ordered_json dist_to_json(const JointDistribution& d) {
  ordered_json j;
  j["variables"] = ordered_json::array();
  for (const auto& v : d.variables()) {
    j["variables"].push_back(
        {{"name", v.name}, {"alphabet", v.alphabet}, {"owner", party_name(v.owner)}});
  }
  j["entries"] = ordered_json::array();
  for (std::size_t flat = 0; flat < d.table_size(); ++flat) {
    if (d.prob(flat) == 0) continue;
    j["entries"].push_back(
        {{"outcome", d.outcome_symbols(flat)}, {"p", format_rational(d.prob(flat))}});
  }
  return j;
}

JointDistribution dist_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("variables") || !j.contains("entries")) {
    fail(Errc::parse_error, "distribution file needs 'variables' and 'entries'");
  }
  std::vector<VariableDef> vars;
  for (const auto& v : j.at("variables")) {
    VariableDef def;
    def.name = v.at("name").get<std::string>();
    def.alphabet = v.at("alphabet").get<std::vector<std::string>>();
    def.owner = party_from_name(v.at("owner").get<std::string>());
    vars.push_back(std::move(def));
  }
  std::vector<DistEntry> entries;
  for (const auto& e : j.at("entries")) {
    entries.push_back({e.at("outcome").get<SymbolTuple>(),
                       parse_rational(e.at("p").get<std::string>())});
  }
  return JointDistribution::build(std::move(vars), entries);
}

JointDistribution load_distribution(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, path + ": " + e.what());
  }
  try {
    return dist_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, path + ": " + e.what());
  }
}

void save_distribution(const JointDistribution& d, const std::string& path) {
  write_file(path, dist_to_json(d).dump(2) + "\n");
}

ordered_json channel_to_json(const Channel& ch) {
  ordered_json j;
  j["input"] = ch.input_alphabet();
  j["output"] = ch.output_alphabet();
  ordered_json rows = ordered_json::object();
  for (std::size_t i = 0; i < ch.input_alphabet().size(); ++i) {
    ordered_json row = ordered_json::object();
    for (std::size_t k = 0; k < ch.output_alphabet().size(); ++k) {
      if (ch.is_exact()) {
        const Rational& p = ch.exact_rows()[i][k];
        if (p != 0) row[ch.output_alphabet()[k]] = format_rational(p);
      } else {
        const double p = ch.rows()[i][k];
        if (p != 0.0) row[ch.output_alphabet()[k]] = p;
      }
    }
    rows[ch.input_alphabet()[i]] = std::move(row);
  }
  j["rows"] = std::move(rows);
  return j;
}

Channel channel_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("input") || !j.contains("output") ||
      !j.contains("rows")) {
    fail(Errc::parse_error, "witness file needs 'input', 'output' and 'rows'");
  }
  const auto input = j.at("input").get<std::vector<std::string>>();
  const auto output = j.at("output").get<std::vector<std::string>>();
  std::vector<std::vector<Rational>> rows(input.size(),
                                          std::vector<Rational>(output.size(), Rational(0)));
  for (const auto& [in_sym, row] : j.at("rows").items()) {
    std::size_t i = input.size();
    for (std::size_t k = 0; k < input.size(); ++k) {
      if (input[k] == in_sym) i = k;
    }
    if (i == input.size()) {
      fail(Errc::parse_error, "row for unknown input symbol '" + in_sym + "'");
    }
    for (const auto& [out_sym, val] : row.items()) {
      std::size_t k = output.size();
      for (std::size_t c = 0; c < output.size(); ++c) {
        if (output[c] == out_sym) k = c;
      }
      if (k == output.size()) {
        fail(Errc::parse_error, "entry for unknown output symbol '" + out_sym + "'");
      }
      rows[i][k] = parse_rational(val.get<std::string>());
    }
  }
  return Channel::exact(input, output, std::move(rows));
}

Channel load_witness(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, path + ": " + e.what());
  }
  try {
    return channel_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, path + ": " + e.what());
  }
}

namespace {

ordered_json checks_to_json(const std::vector<StepCheck>& checks) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json jc{{"name", c.name}, {"passed", c.passed}};
    if (c.value_bits) jc["value_bits"] = *c.value_bits;
    if (c.value_exact) jc["value_exact"] = *c.value_exact;
    arr.push_back(std::move(jc));
  }
  return arr;
}

} // namespace

ordered_json trace_to_json(const ProtocolTrace& trace) {
  ordered_json j;
  j["initial"] = dist_to_json(trace.initial);
  j["steps"] = ordered_json::array();
  for (const auto& s : trace.steps) {
    ordered_json js;
    js["kind"] = step_kind_name(s.kind);
    if (s.party) js["party"] = party_name(*s.party);
    if (!s.target.empty()) js["target"] = s.target;
    if (!s.inputs.empty()) js["inputs"] = s.inputs;
    if (s.from) js["from"] = party_name(*s.from);
    if (s.to) js["to"] = party_name(*s.to);
    if (!s.kept_symbol.empty()) js["kept_symbol"] = s.kept_symbol;
    if (s.event_probability) js["event_probability"] = format_rational(*s.event_probability);
    js["distribution"] = dist_to_json(s.after);
    js["checks"] = checks_to_json(s.checks);
    j["steps"].push_back(std::move(js));
  }
  j["success_probability"] = format_rational(trace.success_probability);
  if (trace.witness_channel) j["witness_channel"] = channel_to_json(*trace.witness_channel);
  j["final_checks"] = checks_to_json(trace.final_checks);
  j["warnings"] = trace.warnings;
  return j;
}

} // namespace secdist::io
