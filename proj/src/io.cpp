#include "minfit/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace minfit {

namespace {

using nlohmann::json;

std::vector<double> parse_csv_numbers(const std::string& line, int lineno) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= line.size()) {
    size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    std::string field = line.substr(pos, comma - pos);
    const size_t b = field.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
      throw MinfitError(ErrorCode::ParseError,
                        "line " + std::to_string(lineno) + ": empty field");
    }
    const size_t e = field.find_last_not_of(" \t\r");
    field = field.substr(b, e - b + 1);
    double v;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
      throw MinfitError(ErrorCode::ParseError, "line " + std::to_string(lineno) +
                                                   ": bad number '" + field + "'");
    out.push_back(v);
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return out;
}

Vec3 vec3_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number())
    throw MinfitError(ErrorCode::ParseError, std::string(what) + " must be [x, y, z]");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

std::vector<OrientedPoint> parse_json_points(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw MinfitError(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_array())
    throw MinfitError(ErrorCode::ParseError, "top-level JSON value must be an array");
  std::vector<OrientedPoint> out;
  for (size_t i = 0; i < doc.size(); ++i) {
    const json& rec = doc[i];
    const std::string where = "record " + std::to_string(i);
    if (!rec.is_object() || !rec.contains("p"))
      throw MinfitError(ErrorCode::ParseError, where + ": expected {\"p\": [...]}");
    OrientedPoint op(vec3_from_json(rec["p"], (where + ": p").c_str()));
    if (rec.contains("n")) {
      const Vec3 n = vec3_from_json(rec["n"], (where + ": n").c_str());
      if (n.norm() <= 1e-300)
        throw MinfitError(ErrorCode::ParseError, where + ": zero normal");
      op.n = Dir3(n);
    }
    out.push_back(op);
  }
  return out;
}

const char* kReasonNames[] = {
    "Generic",          "CoincidentPoints",        "NormalPlaneCoplanar",
    "MirrorSymmetric",  "ParallelNormals",         "EquidistantIntersection",
    "CoplanarConic",    "CollinearPoints",         "OppositeSides",
    "ParticularConfiguration", "NoRealRoot",
};

}  // namespace

std::vector<OrientedPoint> parse_points(std::istream& in, FileFormat fmt) {
  if (fmt == FileFormat::Auto) {
    int c;
    while ((c = in.peek()) != EOF && std::isspace(c)) in.get();
    fmt = (c == '[') ? FileFormat::Json : FileFormat::Csv;
  }
  if (fmt == FileFormat::Json) return parse_json_points(in);

  std::vector<OrientedPoint> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto nums = parse_csv_numbers(line, lineno);
    if (nums.size() == 3) {
      out.emplace_back(Vec3(nums[0], nums[1], nums[2]));
    } else if (nums.size() == 6) {
      const Vec3 n(nums[3], nums[4], nums[5]);
      if (n.norm() <= 1e-300)
        throw MinfitError(ErrorCode::ParseError,
                          "line " + std::to_string(lineno) + ": zero normal");
      out.emplace_back(Vec3(nums[0], nums[1], nums[2]), n);
    } else {
      throw MinfitError(ErrorCode::ParseError, "line " + std::to_string(lineno) +
                                                   ": expected 3 or 6 fields, got " +
                                                   std::to_string(nums.size()));
    }
  }
  return out;
}

std::vector<OrientedPoint> parse_points_file(const std::string& path, FileFormat fmt) {
  std::ifstream in(path);
  if (!in) throw MinfitError(ErrorCode::ParseError, "cannot open '" + path + "'");
  if (fmt == FileFormat::Auto) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") fmt = FileFormat::Json;
    else if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") fmt = FileFormat::Csv;
  }
  return parse_points(in, fmt);
}

std::string solutions_to_json(const std::string& kind, const AnySolutions& sols,
                              std::span<const OrientedPoint> inputs, double wall_ms,
                              int indent) {
  json doc;
  doc["schema"] = "minfit/1";
  doc["kind"] = kind;
  doc["wall_time_ms"] = wall_ms;
  json prims = json::array();
  std::visit(
      [&](const auto& ss) {
        doc["solution_kind"] = to_string(ss.kind);
        doc["reason"] = to_string(ss.diagnosis.reason);
        doc["note"] = ss.diagnosis.note;
        for (const auto& prim : ss.primitives) {
          json p;
          json residuals = json::array();
          if constexpr (std::is_same_v<std::decay_t<decltype(prim)>, Cylinder>) {
            p["type"] = "cylinder";
            p["axis_point"] = {prim.axis_point.x(), prim.axis_point.y(), prim.axis_point.z()};
            p["axis_dir"] = {prim.axis_dir.x(), prim.axis_dir.y(), prim.axis_dir.z()};
            p["radius"] = prim.radius;
            for (const auto& op : inputs) residuals.push_back(cylinder_residual(prim, op.p));
          } else {
            p["type"] = "cone";
            p["apex"] = {prim.apex.x(), prim.apex.y(), prim.apex.z()};
            p["axis_dir"] = {prim.axis_dir.x(), prim.axis_dir.y(), prim.axis_dir.z()};
            p["half_angle"] = prim.half_angle;
            for (const auto& op : inputs) residuals.push_back(cone_residual(prim, op.p));
          }
          p["residuals"] = residuals;
          prims.push_back(p);
        }
      },
      sols);
  doc["primitives"] = prims;
  return doc.dump(indent);
}

Reason reason_from_string(const std::string& s) {
  for (size_t i = 0; i < std::size(kReasonNames); ++i)
    if (s == kReasonNames[i]) return static_cast<Reason>(i);
  throw MinfitError(ErrorCode::ParseError, "unknown reason '" + s + "'");
}

AnySolutions solutions_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MinfitError(ErrorCode::ParseError, e.what());
  }
  if (doc.value("schema", "") != "minfit/1")
    throw MinfitError(ErrorCode::ParseError, "unsupported schema");
  const std::string skind = doc.at("solution_kind").get<std::string>();
  Diagnosis diag{reason_from_string(doc.at("reason").get<std::string>()),
                 doc.value("note", "")};
  const bool cones = !doc["primitives"].empty()
                         ? doc["primitives"][0].value("type", "") == "cone"
                         : doc.value("kind", "").find("cone") != std::string::npos;

  auto assemble = [&](auto tag) -> AnySolutions {
    using Prim = decltype(tag);
    SolutionSet<Prim> ss;
    for (const auto& p : doc["primitives"]) {
      if constexpr (std::is_same_v<Prim, Cylinder>) {
        ss.primitives.emplace_back(vec3_from_json(p.at("axis_point"), "axis_point"),
                                   vec3_from_json(p.at("axis_dir"), "axis_dir"),
                                   p.at("radius").get<double>());
      } else {
        ss.primitives.emplace_back(vec3_from_json(p.at("apex"), "apex"),
                                   vec3_from_json(p.at("axis_dir"), "axis_dir"),
                                   p.at("half_angle").get<double>());
      }
    }
    ss.diagnosis = diag;
    ss.kind = skind == "Finite"           ? SolutionKind::Finite
              : skind == "InfiniteFamily" ? SolutionKind::InfiniteFamily
                                          : SolutionKind::Empty;
    return ss;
  };
  if (cones) return assemble(Cone{Vec3(0, 0, 0), Vec3(0, 0, 1), 0.5});
  return assemble(Cylinder{Vec3(0, 0, 0), Vec3(0, 0, 1), 1.0});
}

std::string to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::MissingNormal: return "MissingNormal";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::ApexQuery: return "ApexQuery";
    case ErrorCode::OffSurface: return "OffSurface";
    case ErrorCode::DegenerateQuadratic: return "DegenerateQuadratic";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::NotAPolynomialMatrix: return "NotAPolynomialMatrix";
    case ErrorCode::SingularPencil: return "SingularPencil";
    case ErrorCode::FlatCircle: return "FlatCircle";
    case ErrorCode::CoplanarInput: return "CoplanarInput";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

}  // namespace minfit
