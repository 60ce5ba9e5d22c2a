#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "conekit/catalog.hpp"
#include "conekit/measures.hpp"
#include "conekit/schlafli.hpp"

namespace conekit {

/// A cone given either as a catalog descriptor string ("orthant(3)") or as a
/// literal {"dim": d, "halfspaces": [[...], ...], "generators": [[...], ...]}.
/// Descriptors keep their closed-form intrinsic volumes.
struct ConeInput {
  PolyhedralCone cone;
  std::optional<ConeDescriptor> descriptor;
  nlohmann::json source;
};

/// Throws InvalidArgument on malformed input or an ambient mismatch.
ConeInput parse_cone(const nlohmann::json& j, std::optional<int> ambient = std::nullopt);

/// Region literal: "whole", a cone (descriptor or literal), or
/// {"union": [<cone>, ...], "complement": bool}.
ConicRegion parse_region(const nlohmann::json& j, int ambient);

nlohmann::json cone_to_json(const PolyhedralCone& c);

/// {"normals": [[...]], "sign_vectors": [[±1, ...]]}.
nlohmann::json arrangement_to_json(const Arrangement& a);
/// Re-enumerates the cells and checks them against the stored sign vectors.
Arrangement arrangement_from_json(const nlohmann::json& j);

/// Line and column (both 1-based) of byte `offset` in `text`.
std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset);

}  // namespace conekit
