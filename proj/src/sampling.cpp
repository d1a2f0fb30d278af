#include "sle/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sle {

namespace {

void compositions_rec(int remaining, int pos, int slots, Eigen::VectorXi& cur,
                      std::vector<SampleOutcome>& out, int k) {
  if (slots == 1) {
    cur(pos) = remaining;
    out.push_back({cur, k});
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur(pos) = v;
    compositions_rec(remaining - v, pos + 1, slots - 1, cur, out, k);
  }
}

}  // namespace

int default_sample_cap(int n) {
  if (n == 2) return 512;
  if (n == 3) return 64;
  return 24;
}

std::vector<SampleOutcome> enumerate_outcomes(int n, int k, int max_k) {
  if (n < 2) throw std::invalid_argument("enumerate_outcomes: need n >= 2");
  if (k < 1) throw std::invalid_argument("enumerate_outcomes: need k >= 1");
  const int cap = max_k > 0 ? max_k : default_sample_cap(n);
  if (k > cap) {
    throw std::domain_error("enumerate_outcomes: k = " + std::to_string(k) +
                            " exceeds the enumeration cap " + std::to_string(cap) +
                            " for n = " + std::to_string(n));
  }
  std::vector<SampleOutcome> out;
  out.reserve(static_cast<std::size_t>(outcome_count(n, k)));
  Eigen::VectorXi cur(n);
  compositions_rec(k, 0, n, cur, out, k);
  return out;
}

std::int64_t outcome_count(int n, int k) {
  // C(k + n - 1, n - 1), exact in int64 for all capped (n, k)
  std::int64_t c = 1;
  for (int j = 1; j <= n - 1; ++j) {
    c = c * (k + j) / j;
  }
  return c;
}

double multinomial_log_coefficient(const Eigen::VectorXi& z) {
  const int k = z.sum();
  double lc = std::lgamma(static_cast<double>(k) + 1.0);
  for (int i = 0; i < z.size(); ++i) {
    lc -= std::lgamma(static_cast<double>(z(i)) + 1.0);
  }
  return lc;
}

double multinomial_mass(const SampleOutcome& z, const Vec& x) {
  if (z.counts.size() != x.size()) {
    throw std::invalid_argument("multinomial_mass: dimension mismatch");
  }
  double logmass = multinomial_log_coefficient(z.counts);
  double sign = 1.0;
  for (int i = 0; i < x.size(); ++i) {
    const int zi = z.counts(i);
    if (zi == 0) continue;  // 0^0 = 1 at boundary states
    const double xi = x(i);
    if (xi == 0.0) return 0.0;
    if (xi < 0.0) {
      if (zi % 2 != 0) sign = -sign;
      logmass += zi * std::log(-xi);
    } else {
      logmass += zi * std::log(xi);
    }
  }
  return sign * std::exp(logmass);
}

OutcomeTable make_outcome_table(int n, int k, int max_k) {
  OutcomeTable t;
  t.n = n;
  t.k = k;
  auto outcomes = enumerate_outcomes(n, k, max_k);
  t.counts.reserve(outcomes.size());
  t.log_coef.reserve(outcomes.size());
  t.states.reserve(outcomes.size());
  for (auto& z : outcomes) {
    t.log_coef.push_back(multinomial_log_coefficient(z.counts));
    t.states.push_back(z.counts.cast<double>() / static_cast<double>(k));
    t.counts.push_back(std::move(z.counts));
  }
  return t;
}

void multinomial_masses(const OutcomeTable& table, const Vec& x,
                        std::vector<double>& masses) {
  if (x.size() != table.n) {
    throw std::invalid_argument("multinomial_masses: dimension mismatch");
  }
  masses.resize(table.counts.size());
  bool interior = true;
  for (int i = 0; i < table.n; ++i) {
    if (!(x(i) > 0.0)) {
      interior = false;
      break;
    }
  }
  if (interior) {
    Vec logx(table.n);
    for (int i = 0; i < table.n; ++i) logx(i) = std::log(x(i));
    for (std::size_t m = 0; m < table.counts.size(); ++m) {
      double lm = table.log_coef[m];
      const Eigen::VectorXi& z = table.counts[m];
      for (int i = 0; i < table.n; ++i) lm += z(i) * logx(i);
      masses[m] = std::exp(lm);
    }
    return;
  }
  // boundary or off-simplex probe
  for (std::size_t m = 0; m < table.counts.size(); ++m) {
    SampleOutcome z{table.counts[m], table.k};
    masses[m] = multinomial_mass(z, x);
  }
}

Mat covariance(const Vec& x) {
  Mat sigma = -x * x.transpose();
  sigma.diagonal() += x;
  return sigma;
}

std::vector<Vec> barycentric_lattice(int n, int resolution) {
  if (resolution < 1) {
    throw std::invalid_argument("barycentric_lattice: resolution >= 1");
  }
  auto outcomes = enumerate_outcomes(n, resolution, resolution);
  std::vector<Vec> pts;
  pts.reserve(outcomes.size());
  for (const auto& z : outcomes) {
    pts.push_back(z.counts.cast<double>() / static_cast<double>(resolution));
  }
  return pts;
}

std::vector<Vec> interior_lattice(int n, int resolution) {
  auto outcomes = enumerate_outcomes(n, resolution, resolution);
  std::vector<Vec> pts;
  for (const auto& z : outcomes) {
    if (z.counts.minCoeff() >= 1) {
      pts.push_back(z.counts.cast<double>() / static_cast<double>(resolution));
    }
  }
  return pts;
}

}  // namespace sle
