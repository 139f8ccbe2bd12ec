/**
 * @file io.hpp
 * @brief Point-file parsing (CSV / JSON) and JSON serialization of solution
 *        sets.
 */
#ifndef MINFIT_IO_HPP
#define MINFIT_IO_HPP

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "minfit/geom.hpp"

namespace minfit {

enum class FileFormat { Csv, Json, Auto };

/// Parses "x,y,z" / "x,y,z,nx,ny,nz" CSV lines or a JSON array of
/// {"p": [x,y,z], "n": [nx,ny,nz]?}. Auto picks JSON when the first
/// non-space character is '['. Throws ParseError with a line number.
std::vector<OrientedPoint> parse_points(std::istream& in, FileFormat fmt = FileFormat::Auto);
std::vector<OrientedPoint> parse_points_file(const std::string& path,
                                             FileFormat fmt = FileFormat::Auto);

using AnySolutions = std::variant<CylinderSolutions, ConeSolutions>;

/// Serializes a solution set to the versioned JSON document (schema
/// "minfit/1"), including per-point residuals for each primitive.
std::string solutions_to_json(const std::string& kind, const AnySolutions& sols,
                              std::span<const OrientedPoint> inputs, double wall_ms,
                              int indent = 2);

/// Inverse of solutions_to_json for round-trip checks. The "kind" string
/// decides cylinder vs cone payloads.
AnySolutions solutions_from_json(const std::string& text);

std::string to_string(ErrorCode c);
Reason reason_from_string(const std::string& s);

}  // namespace minfit

#endif  // MINFIT_IO_HPP
