#include "hardyp/norms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>

#include "hardyp/errors.hpp"
#include "hardyp/rng.hpp"
#include "hardyp/summation.hpp"

namespace hardyp {

namespace {

constexpr std::uint64_t kBlock = 4096;

inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline double norm2(Complex a) { return a.real() * a.real() + a.imag() * a.imag(); }

inline double abs_pow(double n2, double p) {
  if (p == 2.0) return n2;
  if (p == 4.0) return n2 * n2;
  if (p == 1.0) return std::sqrt(n2);
  return std::pow(n2, 0.5 * p);
}

inline Complex unit(double u) {
  const double t = 2.0 * std::numbers::pi * u;
  return {std::cos(t), std::sin(t)};
}

double root(double mean, double p) {
  if (p == 2.0) return std::sqrt(mean);
  if (p == 1.0) return mean;
  return std::pow(mean, 1.0 / p);
}

struct Welford {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
  }

  static Welford merge(const Welford& a, const Welford& b) {
    if (a.count == 0.0) return b;
    if (b.count == 0.0) return a;
    Welford out;
    out.count = a.count + b.count;
    const double d = b.mean - a.mean;
    out.mean = a.mean + d * (b.count / out.count);
    out.m2 = a.m2 + b.m2 + d * d * (a.count * b.count / out.count);
    return out;
  }
};

// Terms as (coefficient, factor range) over a shared list of prime slots.
struct Plan {
  std::vector<std::uint32_t> slot_position;  // 1-based prime position per slot
  std::vector<std::uint32_t> power_offset;   // start of each slot's power table
  std::vector<std::uint32_t> slot_max_exp;
  std::uint32_t power_table_size = 0;
  struct Poly {
    std::vector<Complex> coeff;
    std::vector<std::uint32_t> factor_begin;  // size terms + 1
    std::vector<std::uint32_t> factor_index;  // into the power table
  };
  std::vector<Poly> polys;
};

Plan make_plan(std::span<const DirichletPolynomial> fs, const PrimeTable& table) {
  std::map<std::uint32_t, std::uint32_t> max_exp;  // position -> max exponent
  std::vector<std::vector<Factorization>> facts(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    table.require(fs[i].length());
    for (const auto& t : fs[i].terms()) {
      facts[i].push_back(factorize(t.n, table));
      for (const auto& [pos, e] : facts[i].back().kappa.entries) {
        auto& m = max_exp[pos];
        m = std::max(m, e);
      }
    }
  }
  Plan plan;
  std::map<std::uint32_t, std::uint32_t> slot_of;
  for (const auto& [pos, e] : max_exp) {
    slot_of[pos] = static_cast<std::uint32_t>(plan.slot_position.size());
    plan.slot_position.push_back(pos);
    plan.power_offset.push_back(plan.power_table_size);
    plan.slot_max_exp.push_back(e);
    plan.power_table_size += e;
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    Plan::Poly poly;
    poly.factor_begin.push_back(0);
    std::size_t j = 0;
    for (const auto& t : fs[i].terms()) {
      poly.coeff.push_back(t.a);
      for (const auto& [pos, e] : facts[i][j].kappa.entries) {
        const auto slot = slot_of[pos];
        poly.factor_index.push_back(plan.power_offset[slot] + e - 1);
      }
      poly.factor_begin.push_back(static_cast<std::uint32_t>(poly.factor_index.size()));
      ++j;
    }
    plan.polys.push_back(std::move(poly));
  }
  return plan;
}

void fill_powers(const Plan& plan, std::uint64_t seed, std::uint64_t sample, std::vector<Complex>& powers) {
  for (std::size_t s = 0; s < plan.slot_position.size(); ++s) {
    const Complex z = unit(counter_uniform(seed, sample, plan.slot_position[s]));
    Complex acc = z;
    const std::uint32_t off = plan.power_offset[s];
    powers[off] = z;
    for (std::uint32_t e = 1; e < plan.slot_max_exp[s]; ++e) {
      acc = mul(acc, z);
      powers[off + e] = acc;
    }
  }
}

Complex evaluate_plan(const Plan::Poly& poly, const std::vector<Complex>& powers) {
  Complex total(0.0, 0.0);
  const std::size_t n_terms = poly.coeff.size();
  for (std::size_t t = 0; t < n_terms; ++t) {
    Complex v = poly.coeff[t];
    for (std::uint32_t f = poly.factor_begin[t]; f < poly.factor_begin[t + 1]; ++f) {
      v = mul(v, powers[poly.factor_index[f]]);
    }
    total += v;
  }
  return total;
}

Welford merge_tree(const std::vector<Welford>& blocks, std::size_t stride, std::size_t offset, std::size_t lo,
                   std::size_t hi) {
  if (hi - lo == 1) return blocks[lo * stride + offset];
  const std::size_t mid = lo + (hi - lo) / 2;
  return Welford::merge(merge_tree(blocks, stride, offset, lo, mid), merge_tree(blocks, stride, offset, mid, hi));
}

void validate_p(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("p must be a finite positive number");
}

}  // namespace

std::string to_string(NormMethod m) {
  switch (m) {
    case NormMethod::ExactL2: return "ExactL2";
    case NormMethod::ExactEven: return "ExactEven";
    case NormMethod::MonteCarlo: return "MonteCarlo";
    case NormMethod::DiscQuadrature: return "DiscQuadrature";
  }
  return "?";
}

NormMethod parse_norm_method(const std::string& s) {
  if (s == "ExactL2") return NormMethod::ExactL2;
  if (s == "ExactEven") return NormMethod::ExactEven;
  if (s == "MonteCarlo") return NormMethod::MonteCarlo;
  if (s == "DiscQuadrature") return NormMethod::DiscQuadrature;
  throw InvalidArgument("unknown norm method '" + s + "'");
}

double NormEstimate::value_std_error() const {
  if (std_error == 0.0 || power_mean == 0.0) return 0.0;
  return value * (std_error / power_mean) / p;
}

NormEstimate l2_norm(const DirichletPolynomial& f) {
  CompensatedSum<double> acc;
  for (const auto& t : f.terms()) acc.add(norm2(t.a));
  NormEstimate out;
  out.p = 2.0;
  out.power_mean = acc.value();
  out.value = std::sqrt(out.power_mean);
  out.method = NormMethod::ExactL2;
  return out;
}

NormEstimate even_norm_exact(const DirichletPolynomial& f, unsigned k) {
  if (k == 0) throw InvalidArgument("even_norm_exact requires k >= 1");
  if (k == 1) {
    NormEstimate out = l2_norm(f);
    out.method = NormMethod::ExactEven;
    return out;
  }
  const DirichletPolynomial g = dirichlet_power(f, k - 1);
  NormEstimate out;
  out.p = 2.0 * k;
  out.power_mean = convolution_l2_squared(g, f);
  out.value = std::pow(out.power_mean, 1.0 / out.p);
  out.method = NormMethod::ExactEven;
  return out;
}

SteinhausSample steinhaus_sample(std::uint64_t seed, std::uint64_t sample, std::uint32_t prime_count) {
  SteinhausSample out;
  out.z.reserve(prime_count);
  for (std::uint32_t j = 1; j <= prime_count; ++j) out.z.push_back(unit(counter_uniform(seed, sample, j)));
  return out;
}

Complex evaluate_at_sample(const DirichletPolynomial& f, const SteinhausSample& sample, const PrimeTable& table) {
  table.require(f.length());
  Complex total(0.0, 0.0);
  for (const auto& t : f.terms()) {
    const auto fact = factorize(t.n, table);
    Complex v = t.a;
    for (const auto& [pos, e] : fact.kappa.entries) {
      if (pos > sample.z.size()) {
        throw InvalidArgument("Steinhaus sample does not cover prime position " + std::to_string(pos));
      }
      for (std::uint32_t i = 0; i < e; ++i) v = mul(v, sample.z[pos - 1]);
    }
    total += v;
  }
  return total;
}

std::vector<std::vector<NormEstimate>> mc_norms_joint(std::span<const DirichletPolynomial> fs,
                                                      std::span<const double> ps,
                                                      const MonteCarloOptions& opts, const PrimeTable& table) {
  for (const double p : ps) validate_p(p);
  if (opts.samples < 2) throw InvalidArgument("Monte Carlo needs at least 2 samples");
  const Plan plan = make_plan(fs, table);
  const std::size_t np = ps.size();
  const std::size_t stride = fs.size() * np;
  const std::uint64_t n_blocks = (opts.samples + kBlock - 1) / kBlock;
  std::vector<Welford> stats(n_blocks * stride);

  auto run_block = [&](std::uint64_t b, std::vector<Complex>& powers) {
    const std::uint64_t lo = b * kBlock;
    const std::uint64_t hi = std::min(opts.samples, lo + kBlock);
    Welford* out = &stats[b * stride];
    for (std::uint64_t i = lo; i < hi; ++i) {
      fill_powers(plan, opts.seed, i, powers);
      for (std::size_t q = 0; q < fs.size(); ++q) {
        const double n2 = norm2(evaluate_plan(plan.polys[q], powers));
        for (std::size_t j = 0; j < np; ++j) out[q * np + j].add(abs_pow(n2, ps[j]));
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(n_blocks)));
  if (threads == 1) {
    std::vector<Complex> powers(plan.power_table_size);
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b, powers);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        std::vector<Complex> powers(plan.power_table_size);
        for (std::uint64_t b = next++; b < n_blocks; b = next++) run_block(b, powers);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<std::vector<NormEstimate>> result(fs.size(), std::vector<NormEstimate>(np));
  for (std::size_t q = 0; q < fs.size(); ++q) {
    for (std::size_t j = 0; j < np; ++j) {
      NormEstimate& est = result[q][j];
      est.p = ps[j];
      est.method = NormMethod::MonteCarlo;
      est.samples = opts.samples;
      est.seed = opts.seed;
      const auto terms = fs[q].terms();
      if (terms.size() <= 1) {
        // |F| is constant on the torus.
        const double a = terms.empty() ? 0.0 : std::abs(terms[0].a);
        est.value = a;
        est.power_mean = std::pow(a, ps[j]);
        est.std_error = 0.0;
        continue;
      }
      const Welford w = merge_tree(stats, stride, q * np + j, 0, n_blocks);
      est.power_mean = w.mean;
      est.value = root(w.mean, ps[j]);
      const double var = w.count > 1.0 ? std::max(0.0, w.m2 / (w.count - 1.0)) : 0.0;
      est.std_error = std::sqrt(var / w.count);
    }
  }
  return result;
}

std::vector<NormEstimate> mc_norms(const DirichletPolynomial& f, std::span<const double> ps,
                                   const MonteCarloOptions& opts, const PrimeTable& table) {
  return mc_norms_joint(std::span<const DirichletPolynomial>(&f, 1), ps, opts, table)[0];
}

NormEstimate mc_norm(const DirichletPolynomial& f, double p, const MonteCarloOptions& opts, const PrimeTable& table) {
  return mc_norms(f, std::span<const double>(&p, 1), opts, table)[0];
}

// ---------------------------------------------------------------------------

DiscPolynomial::DiscPolynomial(std::vector<Complex> c) : coeffs(std::move(c)) {
  while (!coeffs.empty() && coeffs.back() == Complex(0.0, 0.0)) coeffs.pop_back();
}

std::size_t DiscPolynomial::degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

Complex DiscPolynomial::operator()(Complex z) const {
  Complex acc(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = mul(acc, z) + *it;
  return acc;
}

DiscPolynomial disc_multiply(const DiscPolynomial& f, const DiscPolynomial& g) {
  if (f.coeffs.empty() || g.coeffs.empty()) return {};
  std::vector<Complex> out(f.coeffs.size() + g.coeffs.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    for (std::size_t j = 0; j < g.coeffs.size(); ++j) out[i + j] += mul(f.coeffs[i], g.coeffs[j]);
  }
  return DiscPolynomial(std::move(out));
}

NormEstimate disc_norm(const DiscPolynomial& f, double p, std::uint64_t nodes) {
  validate_p(p);
  if (nodes < 4 * (f.degree() + 1)) throw InvalidArgument("disc_norm needs at least 4*(degree+1) nodes");
  std::vector<double> vals(nodes);
  for (std::uint64_t k = 0; k < nodes; ++k) {
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nodes));
    vals[k] = abs_pow(norm2(f(w)), p);
  }
  NormEstimate out;
  out.p = p;
  out.method = NormMethod::DiscQuadrature;
  out.power_mean = pairwise_sum(std::span<const double>(vals)) / static_cast<double>(nodes);
  out.value = root(out.power_mean, p);
  return out;
}

DiscPolynomial weissler_dilate(const DiscPolynomial& f, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw InvalidArgument("dilation radius must lie in (0, 1]");
  std::vector<Complex> c = f.coeffs;
  double rj = 1.0;
  for (auto& a : c) {
    a *= rj;
    rj *= r;
  }
  return DiscPolynomial(std::move(c));
}

}  // namespace hardyp
