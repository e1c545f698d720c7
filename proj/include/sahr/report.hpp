#pragma once

#include <json.hpp>
#include <string>
#include <string_view>

#include "sahr/applications.hpp"
#include "sahr/cutting.hpp"
#include "sahr/density.hpp"
#include "sahr/error.hpp"
#include "sahr/oracles.hpp"
#include "sahr/regularity.hpp"
#include "sahr/testing.hpp"

namespace sahr {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kReportFormat = "sahr-report";
inline constexpr int kReportVersion = 1;

/// {"format": "sahr-report", "version": 1, "kind": kind}
Json new_report(std::string_view kind);

/// Pretty-printed with a trailing newline; byte-stable for equal values.
std::string dump_report(const Json& report);
/// Parses and checks the format/version header. Throws ParseError.
Json parse_report(std::string_view text);

Json to_json(const Rational& q);  // "p/q"
Rational rational_from_json(const Json& j);
Json to_json(const Point& p);
Point point_from_json(const Json& j);

Json to_json(const Simplex& s);
Json to_json(const Complexity& c);
Json to_json(const CellPredicate& p);
Json to_json(const HomogeneousWitness& w);
Json to_json(const PartitionReport& r);
PartitionReport partition_from_json(const Json& j);
Json to_json(const StrongPartition& s);
Json to_json(const CuttingReport& r);
Json to_json(const OrderTypeCensus& c);
Json to_json(const SameTypeWitness& w);
Json to_json(const TverbergWitness& w);
Json to_json(const TesterOutcome& o);
Json to_json(const AcceptanceEstimate& e);
Json to_json(const oracle::OracleReport& r);
Json error_record(const Error& e);

}  // namespace sahr
