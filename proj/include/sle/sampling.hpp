#pragma once

#include <cstdint>
#include <vector>

#include "sle/simplex.hpp"

namespace sle {

// One sample of size k: an integer composition z with sum(z) = k.
struct SampleOutcome {
  Eigen::VectorXi counts;
  int size = 0;
};

// Enumeration caps keep |Z^k| below ~50k; larger k belongs to the
// delta-method approximation, not exact enumeration.
int default_sample_cap(int n);

// All compositions of k into n parts, in reverse-lexicographic order.
// Rejects k above the cap unless max_k overrides it.
std::vector<SampleOutcome> enumerate_outcomes(int n, int k, int max_k = 0);

// binomial(k + n - 1, n - 1)
std::int64_t outcome_count(int n, int k);

// log of the multinomial coefficient k! / prod z_i!
double multinomial_log_coefficient(const Eigen::VectorXi& z);

// Multinomial mass of z at x, with the 0^0 = 1 convention at boundary
// states. Computed in log space; safe for off-simplex probes (negative
// coordinates are handled with explicit sign tracking).
double multinomial_mass(const SampleOutcome& z, const Vec& x);

// Precomputed enumeration for repeated mass evaluation at many states.
struct OutcomeTable {
  int n = 0;
  int k = 0;
  std::vector<Eigen::VectorXi> counts;
  std::vector<double> log_coef;
  std::vector<Vec> states;  // empirical states w = z/k
};

OutcomeTable make_outcome_table(int n, int k, int max_k = 0);

// Masses of every outcome in the table at x, in table order.
void multinomial_masses(const OutcomeTable& table, const Vec& x,
                        std::vector<double>& masses);

// Sigma(x) = diag(x) - x x^T; Var[w] under size-k sampling is Sigma(x)/k.
Mat covariance(const Vec& x);

// Lattice {z/m : z in Z^m} on the simplex.
std::vector<Vec> barycentric_lattice(int n, int resolution);
// Same, restricted to z_i >= 1 (strictly interior points).
std::vector<Vec> interior_lattice(int n, int resolution);

}  // namespace sle
