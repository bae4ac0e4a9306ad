#include "io.hpp"

#include "hilbert/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hilbert::tools {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void bad_spec(const std::string& what) {
  throw GeometryError(ErrorKind::InvalidArgument, "domain spec: " + what);
}

Point2 point(const Json& j) {
  if (!j.is_array() || j.size() != 2) bad_spec("points are [x, y] arrays");
  return {j[0].get<double>(), j[1].get<double>()};
}

Point2 point_or(const Json& spec, const char* key, Point2 fallback) {
  return spec.contains(key) ? point(spec.at(key)) : fallback;
}

Json point_json(const Point2& p) { return Json::array({p.x, p.y}); }

Json matrix_json(const Eigen::Matrix3d& m) {
  Json out = Json::array();
  for (int i = 0; i < 3; ++i) out.push_back(Json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return out;
}

}  // namespace

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

ConvexDomain domain_from_json(const Json& spec) {
  if (!spec.is_object() || !spec.contains("type")) bad_spec("expected an object with a \"type\"");
  try {
    const std::string type = spec.at("type").get<std::string>();
    if (type == "disk") {
      return ConvexDomain::disk(point_or(spec, "center", {}), spec.value("radius", 1.0));
    }
    if (type == "ellipse") {
      const Json& axes = spec.at("semi_axes");
      if (!axes.is_array() || axes.size() != 2) bad_spec("semi_axes is [a, b]");
      return ConvexDomain::ellipse(point_or(spec, "center", {}), axes[0].get<double>(), axes[1].get<double>(),
                                   spec.value("rotation", 0.0));
    }
    if (type == "pball") {
      return ConvexDomain::pball(spec.at("p").get<double>(), point_or(spec, "center", {}), spec.value("scale", 1.0));
    }
    if (type == "polygon") {
      std::vector<Point2> vertices;
      for (const auto& v : spec.at("vertices")) vertices.push_back(point(v));
      return ConvexDomain::polygon(std::move(vertices));
    }
    if (type == "regular_polygon") {
      return ConvexDomain::regular_polygon(spec.at("n").get<int>(), spec.value("radius", 1.0), spec.value("phase", 0.0),
                                           point_or(spec, "center", {}));
    }
    if (type == "square") return ConvexDomain::unit_square();
    if (type == "power_cap") return ConvexDomain::power_cap(spec.value("alpha", 2.0));
    if (type == "projective") {
      const Json& rows = spec.at("matrix");
      if (!rows.is_array() || rows.size() != 3) bad_spec("matrix is 3 rows of 3");
      Eigen::Matrix3d m;
      for (int i = 0; i < 3; ++i) {
        if (!rows[i].is_array() || rows[i].size() != 3) bad_spec("matrix is 3 rows of 3");
        for (int j = 0; j < 3; ++j) m(i, j) = rows[i][j].get<double>();
      }
      if (!(std::abs(m.determinant()) > 0.0)) bad_spec("matrix is singular");
      return ConvexDomain::projective_image(domain_from_json(spec.at("inner")), ProjectiveMap(m));
    }
    bad_spec("unknown type \"" + type + "\"");
  } catch (const Json::exception& e) {
    bad_spec(e.what());
  }
}

Json domain_to_json(const ConvexDomain& domain) {
  return std::visit(Overloaded{
                        [](const EllipseShape& e) -> Json {
                          return {{"type", "ellipse"},
                                  {"center", point_json(e.center)},
                                  {"semi_axes", Json::array({e.semi_a, e.semi_b})},
                                  {"rotation", e.rotation}};
                        },
                        [](const PBallShape& b) -> Json {
                          return {{"type", "pball"}, {"p", b.p}, {"center", point_json(b.center)}, {"scale", b.scale}};
                        },
                        [](const PolygonShape& poly) -> Json {
                          Json v = Json::array();
                          for (const auto& p : poly.vertices) v.push_back(point_json(p));
                          return {{"type", "polygon"}, {"vertices", v}};
                        },
                        [](const PowerCapShape& s) -> Json { return {{"type", "power_cap"}, {"alpha", s.alpha}}; },
                        [](const ProjectiveShape& s) -> Json {
                          return {{"type", "projective"},
                                  {"matrix", matrix_json(s.map.matrix())},
                                  {"inner", domain_to_json(*s.inner)}};
                        },
                    },
                    domain.shape());
}

ConvexDomain load_domain(const std::string& text_or_path) {
  std::string text = text_or_path;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') {
    std::ifstream in(text_or_path);
    if (!in) throw GeometryError(ErrorKind::InvalidArgument, "cannot read spec file " + text_or_path);
    std::ostringstream os;
    os << in.rdbuf();
    text = os.str();
  }
  Json spec;
  try {
    spec = Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad_spec(e.what());
  }
  return domain_from_json(spec);
}

Json to_json(const QuadratureEstimate& q) {
  Json history = Json::array();
  for (double h : q.history) history.push_back(number(h));
  return {{"value", number(q.value)},         {"error_bound", number(q.error_bound)},
          {"depth", q.depth},                 {"diverged", q.diverged},
          {"cells", q.cells},                 {"history", history}};
}

Json to_json(const TriangleAreaReport& r) {
  Json out = to_json(r.total);
  out["hexagon"] = to_json(r.hexagon);
  Json corners = Json::array();
  for (const auto& c : r.corners) {
    Json inc = Json::array();
    for (double x : c.increments) inc.push_back(number(x));
    corners.push_back({{"increments", inc},
                       {"partial", number(c.partial)},
                       {"tail", number(c.tail)},
                       {"error_bound", number(c.error_bound)},
                       {"diverged", c.diverged}});
  }
  out["corners"] = corners;
  return out;
}

Json to_json(const NormalizationResult& r) {
  return {{"matrix", matrix_json(r.map.matrix())},
          {"labels", Json::array({r.labels[0], r.labels[1], r.labels[2]})},
          {"alpha", number(r.alpha)},
          {"vertex_residual", number(r.vertex_residual)},
          {"tangency_residual", number(r.tangency_residual)},
          {"e_report", number(r.e_report)},
          {"normalized", domain_to_json(r.normalized)}};
}

Json to_json(const RegularityReport& r) {
  Json out{{"a", number(r.a)},
           {"H", number(r.H)},
           {"K", number(r.K)},
           {"H2", number(r.H2)},
           {"alpha", number(r.alpha)},
           {"M", number(r.M)},
           {"bound_margin", number(r.bound_margin)},
           {"passed", r.passed},
           {"strictly_convex", r.strictly_convex}};
  out["alpha_fit"] = r.alpha_fit ? number(*r.alpha_fit) : Json(nullptr);
  return out;
}

}  // namespace hilbert::tools
