#pragma once

// JSON (de)serialization for the wire formats: matrices as
// {"rows": m, "cols": n, "re": [[...]], "im": [[...]]}, norm specs with
// exponents encoded as numbers or "inf", optimizer reports, diagonal weights.

#include "core/interp.hpp"
#include "core/matrix.hpp"
#include "core/norms.hpp"
#include "core/spaces.hpp"

#include <json.hpp>

namespace nclp {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json density_to_json(const Density& d);
Density density_from_json(const Json& j);

Json exponent_to_json(double p);
double exponent_from_json(const Json& j);

Json norm_spec_to_json(const NormSpec& s);
NormSpec norm_spec_from_json(const Json& j);

Json report_to_json(const OptimizerReport& r);

Json diagonal_weight_to_json(const DiagonalWeight& w);
DiagonalWeight diagonal_weight_from_json(const Json& j);

// Endpoints are either a tag ("lp-state", "row-lp", "col-lp", "oh") with an
// exponent, or explicit {"p", "dl", "dr"} density powers.
Json couple_endpoint_to_json(const CoupleEndpoint& e);
CoupleEndpoint couple_endpoint_from_json(const Json& j);
Json couple_spec_to_json(const CoupleSpec& c);
CoupleSpec couple_spec_from_json(const Json& j);

} // namespace nclp
