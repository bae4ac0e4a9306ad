#pragma once

#include "hilbert/convex_domain.hpp"
#include "hilbert/measure.hpp"
#include "hilbert/normalize.hpp"
#include "hilbert/regularity.hpp"
#include "hilbert/triangles.hpp"

#include "json.hpp"

#include <string>

namespace hilbert::tools {

using Json = nlohmann::json;

/// Domain from a JSON spec. Types: ellipse, disk, pball, polygon,
/// regular_polygon, square, power_cap, projective. Throws InvalidArgument.
ConvexDomain domain_from_json(const Json& spec);
Json domain_to_json(const ConvexDomain& domain);

/// Inline JSON when the text starts with '{', otherwise a file name.
ConvexDomain load_domain(const std::string& text_or_path);

Json to_json(const QuadratureEstimate& q);
Json to_json(const TriangleAreaReport& r);
Json to_json(const NormalizationResult& r);
Json to_json(const RegularityReport& r);

/// Non-finite values become strings ("inf", "-inf", "nan"); JSON has no literal for them.
Json number(double x);

}  // namespace hilbert::tools
