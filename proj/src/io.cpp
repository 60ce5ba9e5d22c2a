#include "conekit/io.hpp"

#include <algorithm>
#include <set>

#include "conekit/errors.hpp"

namespace conekit {

using nlohmann::json;

namespace {

Vector parse_vector(const json& j, int dim, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw InvalidArgument(std::string(what) + ": expected an array of " + std::to_string(dim) + " numbers");
  Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    const json& x = j[static_cast<std::size_t>(i)];
    if (!x.is_number()) throw InvalidArgument(std::string(what) + ": entries must be numbers");
    v(i) = x.get<double>();
  }
  return v;
}

std::vector<Vector> parse_vectors(const json& j, int dim, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string(what) + ": expected an array of vectors");
  std::vector<Vector> out;
  for (const auto& row : j) out.push_back(parse_vector(row, dim, what));
  return out;
}

json vectors_to_json(const Matrix& cols) {
  json out = json::array();
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    json row = json::array();
    for (Eigen::Index r = 0; r < cols.rows(); ++r) row.push_back(cols(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

ConeInput parse_cone(const json& j, std::optional<int> ambient) {
  ConeInput in;
  in.source = j;
  if (j.is_string()) {
    in.descriptor = parse_descriptor(j.get<std::string>());
    in.cone = build_cone(*in.descriptor);
  } else if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      if (key != "dim" && key != "halfspaces" && key != "generators")
        throw InvalidArgument("cone literal: unknown key '" + key + "'");
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
      throw InvalidArgument("cone literal: \"dim\" must be a positive integer");
    ConeLiteral lit;
    lit.dim = j["dim"].get<int>();
    if (j.contains("halfspaces")) lit.halfspaces = parse_vectors(j["halfspaces"], lit.dim, "halfspaces");
    if (j.contains("generators")) lit.generators = parse_vectors(j["generators"], lit.dim, "generators");
    in.cone = convert_representation(lit);
  } else {
    throw InvalidArgument("cone: expected a descriptor string or a literal object");
  }
  if (ambient && in.cone.ambient_dim() != *ambient)
    throw InvalidArgument("cone lives in R^" + std::to_string(in.cone.ambient_dim()) + ", expected R^" +
                          std::to_string(*ambient));
  return in;
}

ConicRegion parse_region(const json& j, int ambient) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "whole")) return ConicRegion::whole(ambient);
  if (j.is_object() && j.contains("union")) {
    for (const auto& [key, value] : j.items())
      if (key != "union" && key != "complement") throw InvalidArgument("region literal: unknown key '" + key + "'");
    if (!j["union"].is_array()) throw InvalidArgument("region literal: \"union\" must be an array");
    std::vector<PolyhedralCone> parts;
    for (const auto& c : j["union"]) parts.push_back(parse_cone(c, ambient).cone);
    bool complement = false;
    if (j.contains("complement")) {
      if (!j["complement"].is_boolean()) throw InvalidArgument("region literal: \"complement\" must be a boolean");
      complement = j["complement"].get<bool>();
    }
    return ConicRegion(ambient, std::move(parts), complement);
  }
  return ConicRegion(parse_cone(j, ambient).cone);
}

json cone_to_json(const PolyhedralCone& c) {
  return json{{"dim", c.ambient_dim()},
              {"halfspaces", vectors_to_json(c.normals())},
              {"generators", vectors_to_json(c.generators())}};
}

json arrangement_to_json(const Arrangement& a) {
  json normals = json::array();
  for (const auto& u : a.normals) normals.push_back(std::vector<double>(u.data(), u.data() + u.size()));
  return json{{"normals", normals}, {"sign_vectors", a.sign_vectors}};
}

Arrangement arrangement_from_json(const json& j) {
  if (!j.is_object() || !j.contains("normals") || !j["normals"].is_array() || j["normals"].empty())
    throw InvalidArgument("arrangement: expected {\"normals\": [[...], ...], ...}");
  const json& first = j["normals"][0];
  if (!first.is_array() || first.empty()) throw InvalidArgument("arrangement: normals must be nonempty arrays");
  const int d = static_cast<int>(first.size());
  Arrangement a = enumerate_cells(d, parse_vectors(j["normals"], d, "normals"));
  if (j.contains("sign_vectors")) {
    std::set<std::vector<int>> stored;
    for (const auto& s : j["sign_vectors"]) stored.insert(s.get<std::vector<int>>());
    const std::set<std::vector<int>> found(a.sign_vectors.begin(), a.sign_vectors.end());
    if (stored != found) throw InvalidArgument("arrangement: sign vectors do not match the normals");
  }
  return a;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace conekit
