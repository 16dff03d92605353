#include "fgld/io.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "fgld/numeric_text.hpp"
#include "json.hpp"

namespace fgld::io {

using Json = nlohmann::ordered_json;

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column,
                       std::string path)
    : Error(message), line_(line), column_(column), path_(std::move(path)) {}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ParseError(path + ": " + message, 0, 0, path);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // e.byte is the 1-based offset of the offending character.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream message;
    message << "syntax error at line " << line << ", column " << column << ": " << e.what();
    throw ParseError(message.str(), line, column, "");
  }
}

void require_object(const Json& j, const std::string& path,
                    const std::set<std::string>& allowed) {
  if (!j.is_object()) {
    fail(path, "expected an object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      fail(path, "unknown field '" + key + "'");
    }
  }
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) {
    fail(path, "missing field '" + key + "'");
  }
  return j.at(key);
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) {
    fail(path, "expected a string");
  }
  return j.get<std::string>();
}

double as_number(const Json& j, const std::string& path) {
  if (j.is_number()) {
    return j.get<double>();
  }
  if (j.is_string()) {
    if (auto value = parse_exact_number(j.get<std::string>())) {
      return *value;
    }
    fail(path, "'" + j.get<std::string>() + "' is not a decimal or fraction");
  }
  fail(path, "expected a number");
}

std::uint64_t as_unsigned(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned()) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) {
    fail(path, "expected an array");
  }
  return j;
}

std::vector<std::string> string_list(const Json& j, const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  for (const auto& item : as_array(j, path)) {
    out.push_back(as_string(item, path + "[" + std::to_string(i++) + "]"));
  }
  return out;
}

void check_schema_version(const Json& doc) {
  const auto version = as_unsigned(field(doc, "schema_version", "$"), "$.schema_version");
  if (version != static_cast<std::uint64_t>(kSchemaVersion)) {
    fail("$.schema_version", "unsupported version " + std::to_string(version));
  }
}

std::map<std::string, std::size_t> index_of(const std::vector<std::string>& ids) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.emplace(ids[i], i);
  }
  return out;
}

Bundle bundle_from_json(const Json& j, const std::string& path,
                        const std::map<std::string, std::size_t>& candidates,
                        const std::map<std::string, std::size_t>& voters) {
  require_object(j, path, {"members", "budget", "delegate", "notion", "weight", "default"});
  Bundle b;
  const Json& members = field(j, "members", path);
  for (const auto& name : string_list(members, path + ".members")) {
    auto it = candidates.find(name);
    if (it == candidates.end()) {
      fail(path + ".members", "unknown candidate '" + name + "'");
    }
    b.members.push_back(it->second);
  }
  b.budget = as_number(field(j, "budget", path), path + ".budget");
  const auto delegate = as_string(field(j, "delegate", path), path + ".delegate");
  auto it = voters.find(delegate);
  if (it == voters.end()) {
    fail(path + ".delegate", "unknown voter '" + delegate + "'");
  }
  b.delegate = it->second;
  const auto notion = as_string(field(j, "notion", path), path + ".notion");
  if (auto parsed = notion_from_string(notion)) {
    b.notion = *parsed;
  } else {
    fail(path + ".notion", "unknown notion '" + notion + "'");
  }
  if (j.contains("weight")) {
    b.weight = as_number(j.at("weight"), path + ".weight");
  }
  if (j.contains("default")) {
    const auto& values = as_array(j.at("default"), path + ".default");
    std::size_t i = 0;
    for (const auto& value : values) {
      b.default_split.push_back(as_number(value, path + ".default[" + std::to_string(i++) + "]"));
    }
    if (b.default_split.empty()) {
      fail(path + ".default", "default must not be empty");
    }
  }
  return b;
}

ElectionInstance instance_from_json(const Json& doc) {
  ElectionInstance instance;
  instance.candidates = string_list(field(doc, "candidates", "$"), "$.candidates");
  const Json& voters = as_array(field(doc, "voters", "$"), "$.voters");
  std::vector<std::string> voter_ids;
  for (std::size_t v = 0; v < voters.size(); ++v) {
    const std::string path = "$.voters[" + std::to_string(v) + "]";
    require_object(voters[v], path, {"id", "bundles"});
    voter_ids.push_back(as_string(field(voters[v], "id", path), path + ".id"));
  }
  const auto candidate_index = index_of(instance.candidates);
  const auto voter_index = index_of(voter_ids);
  for (std::size_t v = 0; v < voters.size(); ++v) {
    const std::string path = "$.voters[" + std::to_string(v) + "]";
    Voter voter{voter_ids[v], {}};
    const Json& bundles = as_array(field(voters[v], "bundles", path), path + ".bundles");
    for (std::size_t s = 0; s < bundles.size(); ++s) {
      voter.bundles.push_back(bundle_from_json(
          bundles[s], path + ".bundles[" + std::to_string(s) + "]", candidate_index,
          voter_index));
    }
    instance.voters.push_back(std::move(voter));
  }
  require_valid(instance);
  return instance;
}

Json number_json(double value) { return format_decimal(value); }

void instance_to_json(const ElectionInstance& instance, Json& doc) {
  doc["schema_version"] = kSchemaVersion;
  doc["candidates"] = instance.candidates;
  Json voters = Json::array();
  for (const auto& voter : instance.voters) {
    Json bundles = Json::array();
    for (const auto& b : voter.bundles) {
      Json jb;
      Json members = Json::array();
      for (std::size_t c : b.members) {
        members.push_back(instance.candidates.at(c));
      }
      jb["members"] = std::move(members);
      jb["budget"] = number_json(b.budget);
      jb["delegate"] = instance.voters.at(b.delegate).id;
      jb["notion"] = to_string(b.notion);
      if (b.weight) {
        jb["weight"] = number_json(*b.weight);
      }
      if (b.has_default()) {
        Json values = Json::array();
        for (double d : b.default_split) {
          values.push_back(number_json(d));
        }
        jb["default"] = std::move(values);
      }
      bundles.push_back(std::move(jb));
    }
    voters.push_back(Json{{"id", voter.id}, {"bundles", std::move(bundles)}});
  }
  doc["voters"] = std::move(voters);
}

Json matrix_rows_json(const SolutionMatrix& x) {
  Json rows = Json::array();
  for (std::size_t v = 0; v < x.rows(); ++v) {
    Json row = Json::array();
    for (double value : x.row(v)) {
      row.push_back(number_json(value));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

SolutionMatrix matrix_from_rows_json(const Json& rows, const std::string& path,
                                     std::size_t n, std::size_t m) {
  as_array(rows, path);
  if (rows.size() != n) {
    fail(path, "expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));
  }
  SolutionMatrix x(n, m);
  for (std::size_t v = 0; v < n; ++v) {
    const std::string row_path = path + "[" + std::to_string(v) + "]";
    as_array(rows[v], row_path);
    if (rows[v].size() != m) {
      fail(row_path, "expected " + std::to_string(m) + " entries");
    }
    for (std::size_t c = 0; c < m; ++c) {
      x(v, c) = as_number(rows[v][c], row_path + "[" + std::to_string(c) + "]");
    }
  }
  return x;
}

}  // namespace

ElectionInstance parse_instance(std::string_view text) {
  const Json doc = parse_json(text);
  require_object(doc, "$", {"schema_version", "candidates", "voters"});
  check_schema_version(doc);
  return instance_from_json(doc);
}

std::string serialize_instance(const ElectionInstance& instance) {
  Json doc;
  instance_to_json(instance, doc);
  return doc.dump(2) + "\n";
}

SolutionMatrix parse_solution(std::string_view text, const ElectionInstance& instance) {
  const Json doc = parse_json(text);
  require_object(doc, "$", {"schema_version", "voters", "candidates", "values"});
  check_schema_version(doc);
  const auto voters = string_list(field(doc, "voters", "$"), "$.voters");
  const auto candidates = string_list(field(doc, "candidates", "$"), "$.candidates");
  const SolutionMatrix raw = matrix_from_rows_json(field(doc, "values", "$"), "$.values",
                                                   voters.size(), candidates.size());
  if (voters.size() != instance.num_voters() || candidates.size() != instance.num_candidates()) {
    throw DimensionError("solution is " + std::to_string(voters.size()) + "x" +
                         std::to_string(candidates.size()) + " but the instance has " +
                         std::to_string(instance.num_voters()) + " voters and " +
                         std::to_string(instance.num_candidates()) + " candidates");
  }
  std::vector<std::string> instance_voters;
  for (const auto& voter : instance.voters) {
    instance_voters.push_back(voter.id);
  }
  const auto voter_index = index_of(instance_voters);
  const auto candidate_index = index_of(instance.candidates);
  SolutionMatrix x(instance.num_voters(), instance.num_candidates());
  std::set<std::size_t> seen_voters;
  std::set<std::size_t> seen_candidates;
  for (std::size_t v = 0; v < voters.size(); ++v) {
    auto vi = voter_index.find(voters[v]);
    if (vi == voter_index.end() || !seen_voters.insert(vi->second).second) {
      fail("$.voters", "voter '" + voters[v] + "' does not match the instance");
    }
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      auto ci = candidate_index.find(candidates[c]);
      if (ci == candidate_index.end()) {
        fail("$.candidates", "candidate '" + candidates[c] + "' does not match the instance");
      }
      if (v == 0 && !seen_candidates.insert(ci->second).second) {
        fail("$.candidates", "candidate '" + candidates[c] + "' repeated");
      }
      x(vi->second, ci->second) = raw(v, c);
    }
  }
  return x;
}

std::string serialize_solution(const SolutionMatrix& x, const ElectionInstance& instance) {
  require_shape(instance, x);
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  Json voters = Json::array();
  for (const auto& voter : instance.voters) {
    voters.push_back(voter.id);
  }
  doc["voters"] = std::move(voters);
  doc["candidates"] = instance.candidates;
  doc["values"] = matrix_rows_json(x);
  return doc.dump(2) + "\n";
}

SearchFinding parse_finding(std::string_view text) {
  const Json doc = parse_json(text);
  require_object(doc, "$", {"schema_version", "candidates", "voters", "witnesses", "finding"});
  check_schema_version(doc);
  SearchFinding finding;
  finding.instance = instance_from_json(doc);
  const std::size_t n = finding.instance.num_voters();
  const std::size_t m = finding.instance.num_candidates();

  const Json& witnesses = as_array(field(doc, "witnesses", "$"), "$.witnesses");
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    finding.witnesses.push_back(
        matrix_from_rows_json(witnesses[i], "$.witnesses[" + std::to_string(i) + "]", n, m));
  }

  const Json& meta = field(doc, "finding", "$");
  require_object(meta, "$.finding", {"kind", "certificate", "generator", "seed", "attempt"});
  const auto kind = as_string(field(meta, "kind", "$.finding"), "$.finding.kind");
  if (auto parsed = finding_kind_from_string(kind)) {
    finding.kind = *parsed;
  } else {
    fail("$.finding.kind", "unknown kind '" + kind + "'");
  }
  const Json& certificate = as_array(field(meta, "certificate", "$.finding"),
                                     "$.finding.certificate");
  for (const auto& value : certificate) {
    finding.certificate.push_back(as_number(value, "$.finding.certificate"));
  }
  const Json& generator = field(meta, "generator", "$.finding");
  require_object(generator, "$.finding.generator", {"n", "m", "weight", "defaults"});
  finding.params.voters = as_unsigned(field(generator, "n", "$.finding.generator"),
                                      "$.finding.generator.n");
  finding.params.candidates = as_unsigned(field(generator, "m", "$.finding.generator"),
                                          "$.finding.generator.m");
  finding.params.weight = as_number(field(generator, "weight", "$.finding.generator"),
                                    "$.finding.generator.weight");
  const auto defaults = as_string(field(generator, "defaults", "$.finding.generator"),
                                  "$.finding.generator.defaults");
  if (auto mode = default_mode_from_string(defaults)) {
    finding.params.defaults = *mode;
  } else {
    fail("$.finding.generator.defaults", "unknown default mode '" + defaults + "'");
  }
  finding.seed = as_unsigned(field(meta, "seed", "$.finding"), "$.finding.seed");
  finding.attempt = as_unsigned(field(meta, "attempt", "$.finding"), "$.finding.attempt");
  return finding;
}

std::string serialize_finding(const SearchFinding& finding) {
  Json doc;
  instance_to_json(finding.instance, doc);
  Json witnesses = Json::array();
  for (const auto& w : finding.witnesses) {
    witnesses.push_back(matrix_rows_json(w));
  }
  doc["witnesses"] = std::move(witnesses);
  Json certificate = Json::array();
  for (double value : finding.certificate) {
    certificate.push_back(number_json(value));
  }
  doc["finding"] = Json{
      {"kind", to_string(finding.kind)},
      {"certificate", std::move(certificate)},
      {"generator",
       Json{{"n", finding.params.voters},
            {"m", finding.params.candidates},
            {"weight", number_json(finding.params.weight)},
            {"defaults", to_string(finding.params.defaults)}}},
      {"seed", finding.seed},
      {"attempt", finding.attempt},
  };
  return doc.dump(2) + "\n";
}

void write_trace_csv(std::ostream& out, const std::vector<TraceSample>& trace) {
  out << "iteration,l1_residual,linf_residual\n";
  for (const auto& sample : trace) {
    out << sample.iteration << ',' << format_shortest(sample.l1) << ','
        << format_shortest(sample.linf) << '\n';
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write '" + path + "'");
  }
  out << contents;
}

}  // namespace fgld::io
