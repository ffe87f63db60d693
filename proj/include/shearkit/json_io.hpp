#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "shearkit/al_engine.hpp"
#include "shearkit/interpolate.hpp"
#include "shearkit/planar.hpp"

namespace shearkit::io {

using Json = nlohmann::ordered_json;

/// Backend of a document: its "backend" field if present, otherwise approx
/// as soon as any floating-point number occurs and exact otherwise.
Backend detect_backend(const Json& doc);

// Scalars are [re, im]; exact components are "num/den" strings. A bare
// number or string is read as a real scalar.
Json to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j, Backend b, const std::string& path = "");

Json to_json(const Poly& p);
Poly poly_from_json(const Json& j, Backend b, const std::string& path = "");

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, Backend b, const std::string& path = "");

Json to_json(const PolyMap& m);
PolyMap polymap_from_json(const Json& j, Backend b, const std::string& path = "");

Json to_json(const VectorField& v);
VectorField field_from_json(const Json& j, Backend b, const std::string& path = "");

Json to_json(const ShearGen& g);
Json to_json(const ShearWord& w);
ShearWord word_from_json(const Json& j, Backend b, const std::string& path = "");

/// A word (object with "generators") or a polynomial map.
AutTarget target_from_json(const Json& j, Backend b, const std::string& path = "");
Json to_json(const AutTarget& t);

NodeData nodedata_from_json(const Json& j, Backend b);

Json to_json(const ShearField& s);
Json to_json(const Decomposition& d);

Json to_json(const ParamFn& f);
ParamFn paramfn_from_json(const Json& j, Backend b, const std::string& path = "");
Json to_json(const ParamAutCurve& c);
ParamAutCurve curve_from_json(const Json& j, const std::string& path = "");

Json to_json(const PlanarFactor& f);
Json to_json(const Factorization& f);

Json to_json(const ErrorReport& r, bool timing = true);

std::vector<Point> points_from_json(const Json& j);
Json to_json(const Point& p);

}  // namespace shearkit::io
