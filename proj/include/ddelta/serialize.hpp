#pragma once

// JSON forms of the core types. Exact values are strings ("1/2-3i"), complex
// floats are [re, im]. Readers throw SchemaViolation naming the JSON path.

#include <json.hpp>

#include "ddelta/charzeros.hpp"
#include "ddelta/currents.hpp"
#include "ddelta/division.hpp"
#include "ddelta/hefer.hpp"
#include "ddelta/synthesis.hpp"

namespace ddelta {

using Json = nlohmann::ordered_json;

Json to_json(const GaussianRational& v);
Json to_json(Complex v);
Json to_json(const PolyC& p);
Json to_json(const ExpPoly& e);
Json to_json(const HElement& h);
Json to_json(const HMatrix& m);
Json to_json(const ExpSolution& s);
Json to_json(const ZeroCluster& c);
Json to_json(const Trajectory& t);
Json to_json(const Projection& p);
Json to_json(const CurrentEval& e);
Json to_json(const GrowthCert& g);
Json to_json(const HeferPair& p);
Json to_json(const MembershipResult& m, const HElement& h, const std::vector<HElement>& gens);
Json to_json(const SmithDecomposition& d, const HMatrix& p);
Json to_json(const EntiretyCertificate& c);

/// The JSON-pointer-like path ("$.entries[0][1]") is carried into errors.
GaussianRational gaussian_from_json(const Json& j, const std::string& path = "$");
Complex complex_from_json(const Json& j, const std::string& path = "$");
PolyC poly_from_json(const Json& j, const std::string& path = "$");
ExpPoly exppoly_from_json(const Json& j, const std::string& path = "$");
/// Accepts the object form or an expression string.
HElement helement_from_json(const Json& j, const std::string& path = "$");
HMatrix hmatrix_from_json(const Json& j, const std::string& path = "$");
ExpSolution expsolution_from_json(const Json& j, const std::string& path = "$");
/// {center: [re, im], radius, poly: [[re, im], ...]} as a bump.
TestFunction testfunction_from_json(const Json& j, const std::string& path = "$");

/// Parses text; malformed input raises SchemaViolation at "$".
Json parse_json(const std::string& text);

}  // namespace ddelta
