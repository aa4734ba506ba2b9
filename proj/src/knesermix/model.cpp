#include "knesermix/model.hpp"

#include <cmath>
#include <stdexcept>

namespace knesermix {

KneserParams::KneserParams(std::int64_t n, std::int64_t k) : n_(n), k_(k) {
  if (n < 1) {
    throw std::invalid_argument("KneserParams: subset size n must be >= 1");
  }
  if (k < 1) {
    throw std::invalid_argument(
        "KneserParams: excess k must be >= 1 (k = 0 gives a bipartite, "
        "non-ergodic walk)");
  }
}

LogValue KneserParams::vertex_count_log() const {
  return log_binomial(ground_size(), n_);
}

LogValue KneserParams::degree_log() const { return log_binomial(n_ + k_, n_); }

BigInt KneserParams::vertex_count_exact() const {
  return exact_binomial(ground_size(), n_);
}

BigInt KneserParams::degree_exact() const { return exact_binomial(n_ + k_, n_); }

double cutoff_time(const KneserParams& p) {
  double n = static_cast<double>(p.subset_size());
  double k = static_cast<double>(p.excess());
  return 0.5 * std::log(static_cast<double>(p.ground_size())) / std::log1p(k / n);
}

SpectrumTable spectrum(const KneserParams& p) {
  const std::int64_t n = p.subset_size();
  const std::int64_t k = p.excess();
  const std::int64_t ground = p.ground_size();
  const LogValue degree = p.degree_log();
  const BigInt degree_exact = p.degree_exact();

  std::vector<SpectrumEntry> entries;
  entries.reserve(static_cast<std::size_t>(n) + 1);
  for (std::int64_t i = 0; i <= n; ++i) {
    SpectrumEntry e;
    e.index = i;
    BigInt adjacency = exact_binomial(n + k - i, n - i);
    e.eigenvalue.sign = (i % 2 == 0) ? 1 : -1;
    e.eigenvalue.magnitude = log_binomial(n + k - i, n - i) / degree;
    e.adjacency_eigenvalue_exact = e.eigenvalue.sign * adjacency;
    e.eigenvalue_exact = BigRational(e.adjacency_eigenvalue_exact, degree_exact);
    if (i == 0) {
      e.multiplicity = LogValue::one();
      e.multiplicity_exact = 1;
    } else {
      e.multiplicity = LogValue::from_log(log_diff_exp(
          log_binomial(ground, i).log(), log_binomial(ground, i - 1).log()));
      e.multiplicity_exact = exact_binomial(ground, i) - exact_binomial(ground, i - 1);
    }
    entries.push_back(std::move(e));
  }
  return SpectrumTable(p, std::move(entries));
}

LogValue stationary_vertex_mass(const KneserParams& p) {
  return LogValue::one() / p.vertex_count_log();
}

BigRational stationary_vertex_mass_exact(const KneserParams& p) {
  return BigRational(1, p.vertex_count_exact());
}

std::vector<double> stationary_lump(const KneserParams& p, LumpKind /*kind*/) {
  // Both lumps see the uniform law through an overlap count with a fixed
  // n-set, so both stationary vectors are H(2n+k, n, n).
  return hypergeometric_pmf_table(
      HypergeometricParams(p.ground_size(), p.subset_size(), p.subset_size()));
}

std::vector<BigRational> stationary_lump_exact(const KneserParams& p,
                                               LumpKind /*kind*/) {
  ExactPmfTable table = hypergeometric_pmf_table_exact(
      HypergeometricParams(p.ground_size(), p.subset_size(), p.subset_size()));
  std::vector<BigRational> out;
  out.reserve(table.numerators.size());
  for (const BigInt& num : table.numerators) {
    out.emplace_back(num, table.denominator);
  }
  return out;
}

Moments stationary_statistic_moments(const KneserParams& p) {
  return hypergeometric_moments(
      HypergeometricParams(p.ground_size(), p.subset_size(), p.subset_size()));
}

}  // namespace knesermix
