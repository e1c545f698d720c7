#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sahr/algebra.hpp"
#include "sahr/geometry.hpp"

namespace sahr {

/// Relation files:
///
///   sahr-relation 1
///   arity 2
///   dim 1
///   degree 2                      # optional declared D, default: measured
///   poly [0,0] 1, [2,0] -1, [1,1] 2, [0,2] -1
///   formula (atom 1)              # optional, default: conjunction of all atoms
///
/// One `poly` line per f_j, in order; exponent vectors have arity*dim entries.
/// Formulas are prefix expressions over (atom j), (and ...), (or ...), (not F);
/// a bare integer j also denotes atom j. '#' starts a comment.
RelationSpec parse_relation(std::string_view text, std::string_view source = "<input>");
RelationSpec parse_relation_file(const std::filesystem::path& path);
std::string format_relation(const RelationSpec& rel);

/// Points files: one point per line, comma-separated coordinates given as
/// "p/q", integers or terminating decimals, with an optional "label:" prefix.
PointConfig parse_points(std::string_view text, std::string_view source = "<input>");
PointConfig parse_points_file(const std::filesystem::path& path);
std::string format_points(const PointConfig& P);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace sahr
