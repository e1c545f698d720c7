#include "sahr/report.hpp"

namespace sahr {

namespace {

Json index_lists(const std::vector<std::vector<std::size_t>>& lists) {
  Json out = Json::array();
  for (const auto& l : lists) out.push_back(l);
  return out;
}

Json rationals(const std::vector<Rational>& qs) {
  Json out = Json::array();
  for (const auto& q : qs) out.push_back(to_json(q));
  return out;
}

Json signs(const SignVector& s) {
  Json out = Json::array();
  for (auto v : s) out.push_back(static_cast<int>(v));
  return out;
}

}  // namespace

Json new_report(std::string_view kind) {
  Json j;
  j["format"] = kReportFormat;
  j["version"] = kReportVersion;
  j["kind"] = kind;
  return j;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

Json parse_report(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("report is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kReportFormat)
    fail(ErrorKind::ParseError, "not a sahr-report document");
  if (j.value("version", 0) != kReportVersion) fail(ErrorKind::ParseError, "unsupported report version");
  return j;
}

Json to_json(const Rational& q) { return format_rational(q); }

Rational rational_from_json(const Json& j) {
  if (!j.is_string()) fail(ErrorKind::ParseError, "rationals are serialized as \"p/q\" strings");
  return parse_rational(j.get<std::string>());
}

Json to_json(const Point& p) { return rationals(p); }

Point point_from_json(const Json& j) {
  Point p;
  for (const auto& x : j) p.push_back(rational_from_json(x));
  return p;
}

Json to_json(const Simplex& s) {
  Json j;
  j["m"] = s.m;
  j["open"] = s.open;
  Json v = Json::array();
  for (const auto& p : s.vertices) v.push_back(to_json(p));
  j["vertices"] = v;
  return j;
}

Json to_json(const Complexity& c) { return Json{{"t", c.t}, {"D", c.D}}; }

Json to_json(const CellPredicate& p) {
  Json j;
  j["dim"] = p.dim;
  j["kappa"] = p.kappa();
  j["complement"] = p.complement;
  j["formula"] = p.formula.to_prefix();
  return j;
}

Json to_json(const HomogeneousWitness& w) {
  Json j;
  j["polarity"] = to_string(w.polarity);
  j["parts"] = index_lists(w.parts);
  j["sizes"] = w.sizes;
  j["guarantee"] = rationals(w.guarantee);
  j["required"] = w.required;
  j["density"] = to_json(w.density);
  j["cell"] = to_json(w.cell);
  Json preds = Json::array();
  for (const auto& p : w.predicates) preds.push_back(to_json(p));
  j["predicates"] = preds;
  Json red = Json::array();
  for (const auto& c : w.reduced) red.push_back(to_json(c));
  j["reduced"] = red;
  return j;
}

Json to_json(const PartitionReport& r) {
  Json j;
  j["arity"] = r.arity;
  j["K"] = r.K;
  j["equitable"] = r.equitable;
  j["bad_mass"] = to_json(r.bad_mass);
  j["product_bad_mass"] = to_json(r.product_bad_mass);
  j["rounds"] = r.rounds;
  j["predicates"] = r.predicates;
  j["max_kappa"] = r.max_kappa;
  j["classes"] = index_lists(r.classes);
  Json h = Json::array();
  for (auto x : r.homogeneity) h.push_back(to_string(x));
  j["homogeneity"] = h;
  return j;
}

PartitionReport partition_from_json(const Json& j) {
  try {
    PartitionReport r;
    r.arity = j.at("arity").get<std::size_t>();
    r.K = j.at("K").get<std::size_t>();
    r.equitable = j.at("equitable").get<bool>();
    r.bad_mass = rational_from_json(j.at("bad_mass"));
    r.product_bad_mass = rational_from_json(j.at("product_bad_mass"));
    r.rounds = j.at("rounds").get<std::size_t>();
    r.predicates = j.at("predicates").get<std::size_t>();
    r.max_kappa = j.at("max_kappa").get<std::size_t>();
    r.classes = j.at("classes").get<std::vector<std::vector<std::size_t>>>();
    for (const auto& h : j.at("homogeneity")) {
      auto s = h.get<std::string>();
      r.homogeneity.push_back(s == "complete" ? Homogeneity::Complete
                              : s == "empty"  ? Homogeneity::Empty
                                              : Homogeneity::Mixed);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("malformed partition report: ") + e.what());
  }
}

Json to_json(const StrongPartition& s) {
  Json j;
  j["partition"] = to_json(s.partition);
  j["q_sets"] = index_lists(s.q_sets);
  j["q_fraction"] = rationals(s.q_fraction);
  j["q_density"] = rationals(s.q_density);
  j["delta"] = to_json(s.delta);
  j["refine_epsilon"] = to_json(s.refine_epsilon);
  return j;
}

Json to_json(const CuttingReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["cells"] = r.cells;
  j["max_crossing"] = r.max_crossing;
  j["cap"] = r.cap;
  j["count_bound"] = r.count_bound.get_str();
  j["probes"] = r.probes;
  j["failures"] = r.failures;
  return j;
}

Json to_json(const OrderTypeCensus& c) {
  Json j;
  j["type"] = signs(c.type);
  j["fraction"] = to_json(c.fraction);
  j["count"] = c.count;
  j["total"] = c.total;
  j["distinct"] = c.distinct;
  j["exact"] = c.exact;
  return j;
}

Json to_json(const SameTypeWitness& w) {
  Json j;
  j["order_type"] = signs(w.order_type);
  j["coverage_fraction"] = to_json(w.coverage_fraction);
  j["subsets"] = index_lists(w.subsets);
  j["density"] = to_json(w.density);
  return j;
}

Json to_json(const TverbergWitness& w) {
  Json j;
  j["q"] = to_json(w.q);
  j["containment_count"] = w.containment_count;
  j["required_count"] = w.required_count;
  j["candidates"] = w.candidates;
  j["subsets"] = index_lists(w.subsets);
  j["density"] = to_json(w.density);
  return j;
}

Json to_json(const TesterOutcome& o) {
  Json j;
  j["verdict"] = o.accept ? "accept" : "reject";
  j["r"] = o.r;
  j["psi"] = o.psi;
  j["v_formula"] = o.v_formula;
  j["v"] = o.v;
  j["clamped"] = o.clamped;
  j["sample"] = o.sample;
  if (o.witness) j["witness"] = Json{{"pattern", o.witness->pattern}, {"image", o.witness->image}};
  return j;
}

Json to_json(const AcceptanceEstimate& e) {
  Json j;
  j["trials"] = e.trials;
  j["accepted"] = e.accepted;
  j["rate"] = to_json(e.rate);
  j["half_width"] = to_json(e.half_width);
  j["low"] = to_json(e.low);
  j["high"] = to_json(e.high);
  j["v"] = e.v;
  return j;
}

Json to_json(const oracle::OracleReport& r) {
  Json j;
  j["check"] = r.check;
  j["pass"] = r.pass;
  if (r.counterexample) j["counterexample"] = *r.counterexample;
  Json vals = Json::object();
  for (const auto& [k, v] : r.values) vals[k] = v;
  j["values"] = vals;
  return j;
}

Json error_record(const Error& e) {
  Json j = new_report("error");
  j["error"] = to_string(e.kind());
  j["contract_failure"] = is_contract_failure(e.kind());
  j["message"] = e.what();
  return j;
}

}  // namespace sahr
