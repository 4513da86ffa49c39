#include "hardyp/io.hpp"

#include <cmath>

#include "hardyp/errors.hpp"

namespace hardyp {

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json polynomial_to_json(const DirichletPolynomial& f) {
  Json coeffs = Json::array();
  for (const auto& t : f.terms()) coeffs.push_back(Json::array({t.n, t.a.real(), t.a.imag()}));
  return Json{{"coeffs", coeffs}};
}

DirichletPolynomial polynomial_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array()) {
    throw InvalidArgument("polynomial JSON needs a \"coeffs\" array");
  }
  std::vector<Term> terms;
  for (const auto& row : j["coeffs"]) {
    if (!row.is_array() || row.size() != 3 || !row[0].is_number_unsigned() || !row[1].is_number() ||
        !row[2].is_number()) {
      throw InvalidArgument("polynomial JSON rows must be [n, re, im] with n a positive integer");
    }
    terms.push_back({row[0].get<std::uint64_t>(), Complex(row[1].get<double>(), row[2].get<double>())});
  }
  return DirichletPolynomial::from_terms(std::move(terms));
}

Json to_json(const NormEstimate& e) {
  Json j{{"p", e.p},
         {"value", number_or_null(e.value)},
         {"power_mean", number_or_null(e.power_mean)},
         {"method", to_string(e.method)}};
  if (e.method == NormMethod::MonteCarlo) {
    j["samples"] = e.samples;
    j["std_error"] = number_or_null(e.std_error);
    j["value_std_error"] = number_or_null(e.value_std_error());
    j["seed"] = e.seed;
  } else {
    j["std_error"] = 0.0;
  }
  return j;
}

NormEstimate norm_estimate_from_json(const Json& j) {
  try {
    NormEstimate e;
    e.p = j.at("p").get<double>();
    e.value = j.at("value").get<double>();
    e.power_mean = j.at("power_mean").get<double>();
    e.method = parse_norm_method(j.at("method").get<std::string>());
    e.std_error = j.value("std_error", 0.0);
    e.samples = j.value("samples", std::uint64_t{0});
    e.seed = j.value("seed", std::uint64_t{0});
    return e;
  } catch (const Json::exception& ex) {
    throw InvalidArgument(std::string("malformed norm estimate: ") + ex.what());
  }
}

Json to_json(const InequalityCheck& c) {
  return Json{{"lhs", number_or_null(c.lhs)},
              {"rhs", number_or_null(c.rhs)},
              {"sigma", number_or_null(c.sigma)},
              {"margin_sigmas", number_or_null(c.margin_sigmas)},
              {"status", to_string(c.status)}};
}

Json to_json(const HLReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? number_or_null(*v) : Json(nullptr); };
  return Json{{"p", r.p},
              {"upper_sum", opt(r.upper_sum)},
              {"lower_sum", opt(r.lower_sum)},
              {"squarefree_sum", opt(r.squarefree_sum)},
              {"norm", to_json(r.norm)},
              {"verdict", to_string(r.verdict)},
              {"slack_sigmas", r.slack_sigmas},
              {"worst_margin_sigmas", number_or_null(r.worst_margin_sigmas)}};
}

Json to_json(const CoefficientBound& b) {
  Json j{{"k", b.k},
         {"p", b.p},
         {"value", b.value},
         {"method", to_string(b.method)},
         {"min_bound", b.min_bound},
         {"argmin", b.argmin},
         {"binomial_bound", number_or_null(b.binomial_bound)}};
  j["closed_form"] = b.closed_form ? Json(*b.closed_form) : Json(nullptr);
  return j;
}

Json to_json(const EulerProductValue& v) {
  return Json{{"value", number_or_null(v.value)},
              {"log_value", number_or_null(v.log_value)},
              {"prime_limit", v.prime_limit},
              {"tail_bound", number_or_null(v.tail_bound)}};
}

Json disc_to_json(const DiscPolynomial& f) {
  Json coeffs = Json::array();
  for (const auto& a : f.coeffs) coeffs.push_back(Json::array({a.real(), a.imag()}));
  return Json{{"disc_coeffs", coeffs}};
}

}  // namespace hardyp
