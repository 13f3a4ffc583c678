#include "matchlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "matchlab/complexity.hpp"
#include "matchlab/constructions.hpp"

namespace matchlab {

namespace {

using nlohmann::json;

const std::vector<std::string> kKinds = {"validate", "distinctness", "pairwise",
                                         "count", "type_to_menu_da"};

const std::vector<std::string> kFields = {
    "id",     "kind",  "family", "k",    "measure", "mechanism", "market",  "vary",
    "d_star", "d_dagger", "domain", "pairs", "seed",  "ceiling",   "jobs", "timing"};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config field '" + where + "': " + what);
}

std::string get_string(const json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) fail(key, "missing");
    return {};
  }
  if (!j[key].is_string()) fail(key, "expected a string");
  return j[key].get<std::string>();
}

std::uint64_t get_uint(const json& j, const char* key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_unsigned()) fail(key, "expected a non-negative integer");
  return j[key].get<std::uint64_t>();
}

ExperimentConfig parse_one(const json& j, std::size_t index) {
  if (!j.is_object()) fail("experiments[" + std::to_string(index) + "]", "expected an object");
  for (const auto& item : j.items()) {
    if (std::find(kFields.begin(), kFields.end(), item.key()) == kFields.end()) {
      fail(item.key(), "unknown field");
    }
  }
  ExperimentConfig c;
  c.kind = get_string(j, "kind", true);
  if (std::find(kKinds.begin(), kKinds.end(), c.kind) == kKinds.end()) {
    fail("kind", "unknown kind '" + c.kind + "'");
  }
  c.id = get_string(j, "id", false);
  if (c.id.empty()) c.id = c.kind + "_" + std::to_string(index);
  const bool family_kind =
      c.kind == "validate" || c.kind == "distinctness" || c.kind == "pairwise";
  c.family = get_string(j, "family", family_kind);
  if (!c.family.empty()) {
    try {
      parse_family(c.family);
    } catch (const std::invalid_argument&) {
      fail("family", "unknown family '" + c.family + "'");
    }
  }
  if (family_kind && !j.contains("k")) fail("k", "missing");
  c.k = static_cast<int>(get_uint(j, "k", 0));
  c.measure = get_string(j, "measure", c.kind == "count");
  if (!c.measure.empty()) {
    try {
      parse_measure(c.measure);
    } catch (const std::invalid_argument&) {
      fail("measure", "unknown measure '" + c.measure + "'");
    }
  }
  c.mechanism = get_string(j, "mechanism", c.kind == "count");
  if (!c.mechanism.empty()) {
    try {
      parse_mechanism(c.mechanism);
    } catch (const std::invalid_argument&) {
      fail("mechanism", "unknown mechanism '" + c.mechanism + "'");
    }
  }
  const bool market_kind = c.kind == "count" || c.kind == "type_to_menu_da";
  c.market = get_string(j, "market", market_kind);
  if (j.contains("vary")) {
    if (!j["vary"].is_array()) fail("vary", "expected an array of applicant names");
    for (const auto& v : j["vary"]) {
      if (!v.is_string()) fail("vary", "expected an array of applicant names");
      c.vary.push_back(v.get<std::string>());
    }
  }
  c.d_star = get_string(j, "d_star", c.kind == "type_to_menu_da");
  c.d_dagger = get_string(j, "d_dagger", c.kind == "type_to_menu_da");
  if (j.contains("domain")) {
    c.domain = get_string(j, "domain", true);
    if (c.domain != "singletons" && c.domain != "full") {
      fail("domain", "expected 'singletons' or 'full'");
    }
  }
  c.pairs = get_uint(j, "pairs", 0);
  c.seed = get_uint(j, "seed", 0);
  c.ceiling = get_uint(j, "ceiling", c.ceiling);
  c.jobs = static_cast<int>(get_uint(j, "jobs", 1));
  if (j.contains("timing")) {
    if (!j["timing"].is_boolean()) fail("timing", "expected a boolean");
    c.timing = j["timing"].get<bool>();
  }
  return c;
}

ReportRow row(const ExperimentConfig& c, std::string quantity, std::string value,
              std::string expected, bool pass) {
  return {c.id, std::move(quantity), std::move(value), std::move(expected), pass, 0};
}

std::string u(std::uint64_t x) { return std::to_string(x); }

int applicant_or_none(const Market& m, const std::string& name) {
  return name.empty() ? -1 : m.applicant(name);
}

Report dispatch(const ExperimentConfig& c) {
  Report r;
  if (c.kind == "validate") {
    const FamilyReport f = validate_family(parse_family(c.family), c.k, c.jobs, c.ceiling);
    r.rows.push_back(row(c, "checks", u(f.checks), "", true));
    r.rows.push_back(row(c, "mismatches", u(f.mismatch_count), "0", f.mismatch_count == 0));
  } else if (c.kind == "distinctness") {
    const FamilyId f = parse_family(c.family);
    const MeasureId m = c.measure.empty() ? family_default_measure(f) : parse_measure(c.measure);
    const DistinctnessResult d = verify_family_distinctness(f, c.k, m, c.jobs, c.ceiling);
    r.rows.push_back(row(c, "classes", u(d.classes), u(d.expected), d.pass()));
  } else if (c.kind == "pairwise") {
    const FamilyId f = parse_family(c.family);
    const MeasureId m = c.measure.empty() ? family_default_measure(f) : parse_measure(c.measure);
    const PairwiseResult p = pairwise_distinctness(f, c.k, m, c.pairs, c.seed, c.jobs);
    r.rows.push_back(row(c, "distinguished_pairs", u(p.distinguished), u(p.pairs), p.pass()));
  } else if (c.kind == "count") {
    const Market skeleton = load_market(c.market);
    std::vector<int> vary;
    for (const auto& name : c.vary) vary.push_back(skeleton.applicant(name));
    const auto family = exhaustive_profiles(skeleton, vary, c.ceiling);
    const MeasureArgs args{applicant_or_none(skeleton, c.d_star),
                           applicant_or_none(skeleton, c.d_dagger)};
    const CountResult cr = count_distinct(
        parse_measure(c.measure), parse_mechanism(c.mechanism), family, args,
        c.domain == "full" ? WitnessDomain::Full : WitnessDomain::Singletons, c.jobs,
        c.ceiling);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", cr.log2);
    r.rows.push_back(row(c, "distinct_functions", u(cr.count), "", true));
    r.rows.push_back(row(c, "log2", buf, "", true));
    r.rows.push_back(row(c, "family_size", u(cr.family_size), "", true));
    r.rows.push_back(row(c, "domain_size", u(cr.domain_size), "", true));
  } else if (c.kind == "type_to_menu_da") {
    const Market skeleton = load_market(c.market);
    const TypeToMenuWitness w =
        type_to_menu_da_witness(skeleton, skeleton.applicant(c.d_star),
                                skeleton.applicant(c.d_dagger), c.jobs, c.ceiling);
    const std::uint64_t node_bound = 2ULL * skeleton.num_institutions();
    r.rows.push_back(row(c, "profiles", u(w.profiles), "", true));
    r.rows.push_back(row(c, "menu_functions", u(w.menu_functions),
                         "<=" + u(w.graphs), w.menu_functions <= w.graphs));
    r.rows.push_back(row(c, "graph_conflicts", u(w.graph_conflicts), "0",
                         w.graph_conflicts == 0));
    r.rows.push_back(row(c, "graph_menu_mismatches", u(w.mismatches), "0", w.mismatches == 0));
    r.rows.push_back(row(c, "max_nodes", u(w.max_nodes), "<=" + u(node_bound),
                         w.max_nodes <= node_bound));
  }
  return r;
}

}  // namespace

std::vector<ExperimentConfig> parse_experiment_configs(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  std::vector<ExperimentConfig> out;
  if (j.is_object() && j.contains("experiments")) {
    if (j.size() != 1) fail("experiments", "must be the only top-level field");
    if (!j["experiments"].is_array()) fail("experiments", "expected an array");
    for (std::size_t i = 0; i < j["experiments"].size(); ++i) {
      out.push_back(parse_one(j["experiments"][i], i));
    }
  } else {
    out.push_back(parse_one(j, 0));
  }
  return out;
}

bool Report::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

void Report::append(const Report& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

Report run_experiment(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r = dispatch(config);
  if (config.timing) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    for (auto& row : r.rows) row.runtime_ms = ms;
  }
  return r;
}

Market load_market(const std::string& source) {
  const auto names = example_names();
  if (std::find(names.begin(), names.end(), source) != names.end()) {
    return example_market(source);
  }
  std::ifstream in(source);
  if (!in) throw std::invalid_argument("no example or readable file named '" + source + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_market(ss.str());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string emit_report(const Report& report, ReportFormat format) {
  const std::vector<std::string> header = {"experiment", "quantity", "value",
                                           "expected",   "pass",     "runtime_ms"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : report.rows) {
    cells.push_back({r.experiment, r.quantity, r.value, r.expected, r.pass ? "PASS" : "FAIL",
                     std::to_string(r.runtime_ms)});
  }
  std::string out;
  if (format == ReportFormat::Csv) {
    auto line = [&](const std::vector<std::string>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += csv_field(v[i]);
      }
      out += '\n';
    };
    line(header);
    for (const auto& c : cells) line(c);
    return out;
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& c : cells) {
    for (std::size_t i = 0; i < c.size(); ++i) width[i] = std::max(width[i], c[i].size());
  }
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      out += v[i];
      if (i + 1 < v.size()) out += std::string(width[i] - v[i].size() + 2, ' ');
    }
    out += '\n';
  };
  line(header);
  for (const auto& c : cells) line(c);
  return out;
}

}  // namespace matchlab
