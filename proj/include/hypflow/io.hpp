#pragma once

// JSON ingestion for spaces, points, directions and functions.
//
// Space:     {"kind":"tree","vertices":[...],"edges":[[a,b,len],...],"ends":[...]}
//            {"kind":"half_plane"} | {"kind":"euclid2"}, optionally with "sample".
// Point:     tree {"vertex":name} | {"edge":index,"offset":s} | {"from":a,"to":b,"offset":s};
//            planar [u, v] | {"u":u,"v":v}.
// Direction: tree end name; half-plane number or "inf"; euclid2 angle or {"angle":a}.
// Function:  {"type":"busemann","direction":d,"base":p?}
//            {"type":"distance_to","point":p,"scale":c?}
//            {"type":"constant","value":c}
//            {"type":"sum"|"max","terms":[{"weight":w,"fn":{...}},...],"unchecked":false}

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hypflow/convex.hpp"
#include "hypflow/space.hpp"

namespace hypflow::io {

using nlohmann::json;

/// Parses a file; malformed JSON raises ConfigError naming the file.
json load_json(const std::filesystem::path& path);

SpacePtr space_from_json(const json& j);
/// The "sample" member of a space document, or the space's default sample.
SampleSpec sample_from_json(const json& space_doc, SpaceKind kind);

Point point_from_json(const Space& space, const json& j);
BoundaryDirection direction_from_json(const Space& space, const json& j);
ConvexFunction function_from_json(const SpacePtr& space, const json& j);

/// Default base point: the first core vertex, (0, 1) or (0, 0).
Point default_base(const Space& space);

json point_to_json(const Space& space, const Point& p);
json direction_to_json(const Space& space, const BoundaryDirection& d);

/// %.17g, with "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double x);

}  // namespace hypflow::io
