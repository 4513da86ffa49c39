#pragma once

// JSON forms of the library's value types.

#include <json.hpp>

#include "hardyp/arith.hpp"
#include "hardyp/bounds.hpp"
#include "hardyp/dseries.hpp"
#include "hardyp/norms.hpp"

namespace hardyp {

using Json = nlohmann::ordered_json;

/// {"coeffs": [[n, re, im], ...]} sorted by n.
Json polynomial_to_json(const DirichletPolynomial& f);
/// Throws InvalidArgument on malformed input.
DirichletPolynomial polynomial_from_json(const Json& j);

Json to_json(const NormEstimate& e);
NormEstimate norm_estimate_from_json(const Json& j);
Json to_json(const InequalityCheck& c);
Json to_json(const HLReport& r);
Json to_json(const CoefficientBound& b);
Json to_json(const EulerProductValue& v);
Json disc_to_json(const DiscPolynomial& f);

/// Non-finite doubles become null.
Json number_or_null(double x);

}  // namespace hardyp
