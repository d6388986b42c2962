#include "feeloc/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "feeloc/error.hpp"

namespace feeloc {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::kParse, what); }

std::string scalar_text(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  bad(where + ": expected a number string");
}

Rational rational_at(const Json& j, const std::string& where) {
  return parse_rational(scalar_text(j, where));
}

ExtRational ext_at(const Json& j, const std::string& where) {
  return parse_ext(scalar_text(j, where));
}

std::vector<FeePoint> points_at(const Json& fee, const char* key) {
  std::vector<FeePoint> out;
  if (!fee.contains(key)) return out;
  const Json& arr = fee.at(key);
  if (!arr.is_array()) bad(std::string("fee.") + key + ": expected an array");
  for (size_t k = 0; k < arr.size(); ++k) {
    const std::string where = std::string("fee.") + key + "[" + std::to_string(k) + "]";
    const Json& p = arr[k];
    if (!p.is_object() || !p.contains("at") || !p.contains("fee")) {
      bad(where + ": expected {\"at\", \"fee\"}");
    }
    out.push_back({rational_at(p.at("at"), where + ".at"), ext_at(p.at("fee"), where + ".fee")});
  }
  return out;
}

Json points_json(const std::vector<FeePoint>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back({{"at", to_string(p.at)}, {"fee", to_string(p.fee)}});
  return arr;
}

Json strings(const std::vector<Rational>& v) {
  Json arr = Json::array();
  for (const auto& q : v) arr.push_back(to_string(q));
  return arr;
}

Json ext_strings(const std::vector<ExtRational>& v) {
  Json arr = Json::array();
  for (const auto& q : v) arr.push_back(to_string(q));
  return arr;
}

Json violation_json(const Violation& v) {
  Json j;
  j["coalition"] = v.coalition;
  j["truth"] = strings(v.truth);
  j["misreport"] = strings(v.misreport);
  j["cost_before"] = ext_strings(v.cost_before);
  j["cost_after"] = ext_strings(v.cost_after);
  return j;
}

Json violation_list(const std::vector<Violation>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs) arr.push_back(violation_json(v));
  return arr;
}

}  // namespace

std::string objective_name(Objective objective) {
  return objective == Objective::kTotalCost ? "tc" : "mc";
}

Objective parse_objective(std::string_view name) {
  if (name == "tc") return Objective::kTotalCost;
  if (name == "mc") return Objective::kMaxCost;
  bad("objective must be \"tc\" or \"mc\", got \"" + std::string(name) + "\"");
}

InstanceFile parse_instance(std::string_view json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) bad("instance must be a JSON object");
  if (!root.contains("fee") || !root.at("fee").is_object()) bad("missing object \"fee\"");
  if (!root.contains("agents") || !root.at("agents").is_array()) bad("missing array \"agents\"");

  const Json& fee = root.at("fee");
  if (!fee.contains("default")) bad("fee.default missing");
  InstanceFile out;
  out.fee = EntranceFee(ext_at(fee.at("default"), "fee.default"),
                        points_at(fee, "breakpoints"), points_at(fee, "overrides"));
  const Json& agents = root.at("agents");
  for (size_t k = 0; k < agents.size(); ++k) {
    out.agents.push_back(rational_at(agents[k], "agents[" + std::to_string(k) + "]"));
  }
  AgentProfile check(out.agents);  // rejects an empty profile
  if (root.contains("m")) {
    const Json& m = root.at("m");
    if (!m.is_number_integer() || m.get<long long>() < 1) bad("m must be a positive integer");
    out.m = static_cast<size_t>(m.get<long long>());
  }
  if (root.contains("objective")) {
    if (!root.at("objective").is_string()) bad("objective must be a string");
    out.objective = parse_objective(root.at("objective").get<std::string>());
  }
  return out;
}

std::string serialize_instance(const InstanceFile& instance) {
  Json j;
  j["fee"] = {{"default", to_string(instance.fee.default_fee())},
              {"breakpoints", points_json(instance.fee.breakpoints())},
              {"overrides", points_json(instance.fee.overrides())}};
  j["agents"] = strings(instance.agents);
  j["m"] = instance.m;
  j["objective"] = objective_name(instance.objective);
  return j.dump(2) + "\n";
}

InstanceFile read_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void write_instance_file(const std::filesystem::path& path,
                         const InstanceFile& instance) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << serialize_instance(instance);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
}

std::string solution_json(const Solution& solution, Objective objective) {
  Json j;
  j["objective"] = objective_name(objective);
  j["m"] = solution.placement.size();
  j["locations"] = strings(solution.placement.locations);
  Json parts = Json::array();
  for (const auto& [a, b] : solution.partition) parts.push_back({a, b});
  j["partition"] = parts;
  j["value"] = to_string(solution.value);
  j["value_decimal"] = to_decimal(solution.value);
  return j.dump(2) + "\n";
}

std::string outcome_json(const std::string& mechanism, const Outcome& outcome,
                         const ExtRational& value, const ExtRational& ratio) {
  Json j;
  j["mechanism"] = mechanism;
  if (const auto* p = std::get_if<Placement>(&outcome)) {
    j["locations"] = strings(p->locations);
  } else {
    Json arr = Json::array();
    for (const auto& [placement, prob] : std::get<Lottery>(outcome).support) {
      Json e;
      if (placement.size() == 1) {
        e["loc"] = to_string(placement.locations.front());
      } else {
        e["locations"] = strings(placement.locations);
      }
      e["p"] = to_string(prob);
      arr.push_back(e);
    }
    j["lottery"] = arr;
  }
  j["value"] = to_string(value);
  j["ratio"] = to_string(ratio);
  j["ratio_decimal"] = to_decimal(ratio);
  return j.dump(2) + "\n";
}

std::string violations_json(const std::string& mechanism,
                            const std::vector<Violation>& violations) {
  Json j;
  j["mechanism"] = mechanism;
  j["count"] = violations.size();
  j["violations"] = violation_list(violations);
  return j.dump(2) + "\n";
}

std::string report_json(const AuditReport& report) {
  Json j;
  j["mechanism"] = report.mechanism;
  j["objective"] = objective_name(report.objective);
  j["bound_formula"] = report.bound_formula;
  j["worst_ratio"] = to_string(report.worst_ratio);
  j["worst_ratio_decimal"] = to_decimal(report.worst_ratio);
  j["worst_instance"] = report.worst_instance;
  j["within_bound"] = report.all_within_bound;
  j["low_k_instances"] = report.low_k_instances;
  if (report.tolerance) {
    j["tolerance"] = to_string(*report.tolerance);
    j["ratio_witness"] = report.ratio_witness;
    j["sp_witness"] = report.sp_witness;
    j["certified"] = report.certified();
  }
  Json arr = Json::array();
  for (const auto& r : report.instances) {
    Json e;
    e["id"] = r.id;
    e["r_e"] = to_string(r.r_e);
    e["ratio"] = to_string(r.ratio);
    e["ratio_decimal"] = to_decimal(r.ratio);
    e["bound"] = to_string(r.bound);
    e["within_bound"] = r.within_bound;
    if (r.k_fraction) e["k_fraction"] = to_string(*r.k_fraction);
    arr.push_back(e);
  }
  j["instances"] = arr;
  j["violations"] = violation_list(report.violations);
  return j.dump(2) + "\n";
}

std::string error_json(std::string_view kind, std::string_view message) {
  Json j;
  j["error"] = std::string(kind);
  j["message"] = std::string(message);
  return j.dump() + "\n";
}

std::string csv_header() {
  return "family,params,r_e,mechanism,objective,ratio_exact,ratio_decimal,"
         "bound_exact,within_bound\n";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string csv_line(const CsvRow& row) {
  std::string out;
  const std::string fields[] = {
      row.family,
      row.params,
      to_string(row.r_e),
      row.mechanism,
      objective_name(row.objective),
      to_string(row.ratio),
      to_decimal(row.ratio),
      to_string(row.bound),
      row.ratio <= row.bound ? "true" : "false",
  };
  for (size_t k = 0; k < std::size(fields); ++k) {
    if (k > 0) out += ',';
    out += csv_field(fields[k]);
  }
  return out + "\n";
}

}  // namespace feeloc
