#include "hardyp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hardyp/errors.hpp"
#include "hardyp/summation.hpp"

namespace hardyp {

namespace {

double norm2(Complex a) { return a.real() * a.real() + a.imag() * a.imag(); }

void require_upper_p(double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw InvalidArgument("upper Hardy-Littlewood sum requires p >= 2");
}

void require_lower_p(double p) {
  if (!(p > 0.0 && p <= 2.0)) throw InvalidArgument("lower Hardy-Littlewood sum requires 0 < p <= 2");
}

void require_small_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("coefficient bound requires 0 < p < 1");
}

template <typename Weight>
double weighted_sum(const DirichletPolynomial& f, const PrimeTable& table, Weight&& weight) {
  table.require(f.length());
  CompensatedSum<double> acc;
  for (const auto& t : f.terms()) acc.add(norm2(t.a) * weight(factorize(t.n, table)));
  return acc.value();
}

double phi_of(const Factorization& fact, double alpha) {
  double w = 1.0;
  for (const auto& pp : fact.factors) w *= phi_disc_weight(pp.exponent, alpha);
  return w;
}

double d_of(const Factorization& fact, double alpha) {
  double w = 1.0;
  for (const auto& pp : fact.factors) w *= gen_binomial_coefficient(pp.exponent, alpha);
  return w;
}

}  // namespace

std::string to_string(Verdict v) { return v == Verdict::Consistent ? "Consistent" : "ViolationSuspected"; }

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::PassWithinSlack: return "pass-within-slack";
    case CheckStatus::Violation: return "violation";
  }
  return "?";
}

std::string to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::ClosedForm: return "ClosedForm";
    case BoundMethod::GridMinimum: return "GridMinimum";
    case BoundMethod::BinomialBound: return "BinomialBound";
    case BoundMethod::BestOf: return "BestOf";
  }
  return "?";
}

InequalityCheck check_inequality(double lhs, double rhs, double sigma, double abs_tolerance) {
  InequalityCheck out{lhs, rhs, sigma, CheckStatus::Pass, 0.0};
  const double tol = kFloatTolerance * std::max({std::abs(lhs), std::abs(rhs), 1.0}) + abs_tolerance;
  const double diff = rhs - lhs;
  if (sigma > 0.0) {
    out.margin_sigmas = diff / sigma;
  } else {
    out.margin_sigmas = diff >= 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  if (diff >= -tol) {
    out.status = CheckStatus::Pass;
  } else if (diff >= -(kSlackSigmas * sigma + tol)) {
    out.status = CheckStatus::PassWithinSlack;
  } else {
    out.status = CheckStatus::Violation;
  }
  return out;
}

// ---------------------------------------------------------------------------

double hl_upper_sum(const DirichletPolynomial& f, double p, const PrimeTable& table) {
  require_upper_p(p);
  return weighted_sum(f, table, [p](const Factorization& fact) { return phi_of(fact, p / 2.0); });
}

double hl_lower_sum(const DirichletPolynomial& f, double p, const PrimeTable& table) {
  require_lower_p(p);
  return weighted_sum(f, table, [p](const Factorization& fact) { return 1.0 / phi_of(fact, 2.0 / p); });
}

double squarefree_lower_sum(const DirichletPolynomial& f, double p, const PrimeTable& table) {
  require_lower_p(p);
  return weighted_sum(f, table, [p](const Factorization& fact) {
    return fact.mobius == 0 ? 0.0 : 1.0 / d_of(fact, 2.0 / p);
  });
}

HLReport hl_report(const DirichletPolynomial& f, double p, const NormEstimate& norm, const PrimeTable& table) {
  HLReport rep;
  rep.p = p;
  rep.norm = norm;
  const double sigma = norm.value_std_error();
  std::vector<InequalityCheck> checks;
  if (p >= 2.0) {
    rep.upper_sum = hl_upper_sum(f, p, table);
    checks.push_back(check_inequality(norm.value, std::sqrt(*rep.upper_sum), sigma));
  }
  if (p <= 2.0) {
    rep.lower_sum = hl_lower_sum(f, p, table);
    rep.squarefree_sum = squarefree_lower_sum(f, p, table);
    checks.push_back(check_inequality(std::sqrt(*rep.lower_sum), norm.value, sigma));
    checks.push_back(check_inequality(std::sqrt(*rep.squarefree_sum), norm.value, sigma));
  }
  rep.worst_margin_sigmas = std::numeric_limits<double>::infinity();
  for (const auto& c : checks) {
    rep.worst_margin_sigmas = std::min(rep.worst_margin_sigmas, c.margin_sigmas);
    if (c.status == CheckStatus::Violation) rep.verdict = Verdict::ViolationSuspected;
  }
  return rep;
}

double helson_divisor_constant(std::uint64_t N, const PrimeTable& table) {
  if (N == 0) throw InvalidArgument("helson_divisor_constant requires N >= 1");
  table.require(N);
  double best = 1.0;
  for (std::uint64_t n = 2; n <= N; ++n) best = std::max(best, divisor_alpha(n, 2.0, table));
  return std::sqrt(best);
}

double homogeneous_projection_constant(unsigned m, double p) {
  if (!(p > 0.0)) throw InvalidArgument("p must be positive");
  if (p >= 1.0) return 1.0;
  return std::sqrt(std::exp(1.0)) * std::pow(static_cast<double>(m) + 1.0, 1.0 / p - 1.0);
}

// ---------------------------------------------------------------------------

double disc_upper_sum(const DiscPolynomial& f, double p) {
  require_upper_p(p);
  CompensatedSum<double> acc;
  for (std::size_t j = 0; j < f.coeffs.size(); ++j) acc.add(norm2(f.coeffs[j]) * phi_disc_weight(j, p / 2.0));
  return acc.value();
}

double disc_lower_sum(const DiscPolynomial& f, double p) {
  require_lower_p(p);
  CompensatedSum<double> acc;
  for (std::size_t j = 0; j < f.coeffs.size(); ++j) acc.add(norm2(f.coeffs[j]) / phi_disc_weight(j, 2.0 / p));
  return acc.value();
}

double burbea_sum(const DiscPolynomial& f, unsigned k) {
  if (k < 1) throw InvalidArgument("burbea_sum requires k >= 1");
  DiscPolynomial g = f;
  for (unsigned i = 1; i < k; ++i) g = disc_multiply(g, f);
  CompensatedSum<double> acc;
  for (std::size_t j = 0; j < g.coeffs.size(); ++j) {
    acc.add(norm2(g.coeffs[j]) / gen_binomial_coefficient(j, static_cast<double>(k)));
  }
  return acc.value();
}

// ---------------------------------------------------------------------------

double c1p_exact(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("C(1,p) requires p > 0");
  if (p >= 1.0) return 1.0;
  return std::sqrt(2.0 / p) * std::pow(1.0 - p / 2.0, 1.0 / p - 0.5);
}

double coefficient_min_objective(double x, unsigned k, double p) {
  return std::exp(-0.5 * k * std::log(x) + (1.0 / x - 1.0 / p) * std::log1p(-x));
}

CoefficientBound ckp_upper_bound(unsigned k, double p) {
  require_small_p(p);
  if (k == 0) throw InvalidArgument("coefficient bound requires k >= 1");
  auto log_obj = [k, p](double x) { return -0.5 * k * std::log(x) + (1.0 / x - 1.0 / p) * std::log1p(-x); };

  // Coarse scan with 1-x geometric from 1-p down to 1e-9, then golden-section
  // refinement around the best grid point.
  constexpr int kGrid = 2048;
  constexpr double kTop = 1e-9;
  const double u0 = 1.0 - p;
  std::vector<double> xs(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) xs[i] = 1.0 - u0 * std::pow(kTop / u0, static_cast<double>(i) / kGrid);
  xs[0] = p;
  int best = 0;
  double best_val = log_obj(xs[0]);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = log_obj(xs[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = xs[std::max(0, best - 1)];
  double b = xs[std::min(kGrid, best + 1)];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = log_obj(c);
  double fd = log_obj(d);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = log_obj(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = log_obj(d);
    }
  }
  double argmin = xs[best];
  for (const double x : {a, b, 0.5 * (a + b)}) {
    const double v = log_obj(x);
    if (v < best_val) {
      best_val = v;
      argmin = x;
    }
  }

  CoefficientBound out;
  out.k = k;
  out.p = p;
  out.method = BoundMethod::BestOf;
  out.min_bound = std::exp(best_val);
  out.argmin = argmin;
  out.binomial_bound = std::sqrt(gen_binomial_coefficient(k, std::ceil(2.0 / p)));
  out.value = std::min(out.min_bound, out.binomial_bound);
  if (k == 1) out.closed_form = c1p_exact(p);
  return out;
}

CnpBound cnp_bound(std::uint64_t n, double p, const PrimeTable& table) {
  require_small_p(p);
  const auto fact = factorize(n, table);
  CnpBound out;
  const double c1 = c1p_exact(p);
  for (const auto& pp : fact.factors) {
    out.value *= pp.exponent == 1 ? c1 : ckp_upper_bound(pp.exponent, p).value;
  }
  out.exact = fact.square_free();
  return out;
}

double cnp_upper_bound(std::uint64_t n, double p, const PrimeTable& table) { return cnp_bound(n, p, table).value; }

double cole_gamelin_margin(const DirichletPolynomial& f, std::span<const Complex> z, double p,
                           const NormEstimate& norm, const PrimeTable& table) {
  if (!(p > 0.0)) throw InvalidArgument("p must be positive");
  double log_factor = 0.0;
  for (const auto& zj : z) {
    const double r2 = norm2(zj);
    if (!(r2 < 1.0)) throw InvalidArgument("point evaluation needs |z_j| < 1");
    log_factor += -std::log1p(-r2) / p;
  }
  table.require(f.length());
  Complex bf(0.0, 0.0);
  for (const auto& t : f.terms()) {
    const auto fact = factorize(t.n, table);
    Complex v = t.a;
    for (const auto& [pos, e] : fact.kappa.entries) {
      if (pos > z.size()) {
        v = 0.0;
        break;
      }
      for (std::uint32_t i = 0; i < e; ++i) v *= z[pos - 1];
    }
    bf += v;
  }
  return std::exp(log_factor) * norm.value - std::abs(bf);
}

Complex duality_pairing(const DirichletPolynomial& f, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("pairing requires beta > 0");
  CompensatedSum<Complex> acc;
  for (const auto& t : f.terms()) {
    if (t.n == 1) {
      acc.add(t.a);
    } else {
      const double nd = static_cast<double>(t.n);
      acc.add(t.a * (std::pow(std::log(nd), -beta) / std::sqrt(nd)));
    }
  }
  return acc.value();
}

}  // namespace hardyp
