#include <doctest.h>

#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "sle/sampling.hpp"

using namespace sle;

TEST_CASE("enumeration: order, count, caps") {
  const auto z21 = enumerate_outcomes(2, 1);
  REQUIRE(z21.size() == 2);
  CHECK(z21[0].counts(0) == 1);
  CHECK(z21[0].counts(1) == 0);
  CHECK(z21[1].counts(0) == 0);
  CHECK(z21[1].counts(1) == 1);

  const auto z22 = enumerate_outcomes(2, 2);
  REQUIRE(z22.size() == 3);
  CHECK(z22[0].counts(0) == 2);
  CHECK(z22[1].counts(0) == 1);
  CHECK(z22[1].counts(1) == 1);
  CHECK(z22[2].counts(1) == 2);

  // binomial(7,2) = 21 via the log-gamma counting oracle
  CHECK(oracles::composition_count(3, 5) == 21);
  CHECK(enumerate_outcomes(3, 5).size() == 21);
  CHECK(outcome_count(3, 5) == 21);

  // reverse-lexicographic: strictly decreasing as integer tuples
  const auto z35 = enumerate_outcomes(3, 5);
  for (std::size_t i = 1; i < z35.size(); ++i) {
    bool greater = false;
    for (int c = 0; c < 3; ++c) {
      if (z35[i - 1].counts(c) != z35[i].counts(c)) {
        greater = z35[i - 1].counts(c) > z35[i].counts(c);
        break;
      }
    }
    CHECK(greater);
  }

  CHECK_THROWS_AS(enumerate_outcomes(2, 513), std::domain_error);
  CHECK_THROWS_AS(enumerate_outcomes(3, 65), std::domain_error);
  CHECK_THROWS_AS(enumerate_outcomes(4, 25), std::domain_error);
  CHECK_NOTHROW(enumerate_outcomes(2, 600, 600));  // explicit override
  CHECK_THROWS_AS(enumerate_outcomes(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_outcomes(2, 0), std::invalid_argument);
}

TEST_CASE("multinomial masses: point values") {
  Vec x(2);
  x << 0.3, 0.7;
  SampleOutcome z{Eigen::Vector2i(1, 0), 1};
  CHECK(multinomial_mass(z, x) == doctest::Approx(0.3).epsilon(1e-14));

  Vec half(2);
  half << 0.5, 0.5;
  SampleOutcome z11{Eigen::Vector2i(1, 1), 2};
  CHECK(multinomial_mass(z11, half) == doctest::Approx(0.5).epsilon(1e-14));

  // z=(2,1,2) at (0.2,0.3,0.5): 30 * 0.04 * 0.3 * 0.25 = 0.09, cross-checked
  // against a Monte-Carlo frequency oracle
  Vec x3(3);
  x3 << 0.2, 0.3, 0.5;
  Eigen::VectorXi counts(3);
  counts << 2, 1, 2;
  SampleOutcome z212{counts, 5};
  const double mass = multinomial_mass(z212, x3);
  CHECK(mass == doctest::Approx(0.09).epsilon(1e-13));

  std::mt19937_64 rng(20240811);
  const int draws = 10'000'000;
  int hits = 0;
  for (int d = 0; d < draws; ++d) {
    const Eigen::VectorXi zd = oracles::multinomial_draw(rng, 5, x3);
    if (zd(0) == 2 && zd(1) == 1 && zd(2) == 2) ++hits;
  }
  const double freq = static_cast<double>(hits) / draws;
  CHECK(std::abs(mass - freq) < 3e-4);
}

TEST_CASE("multinomial masses: boundary conventions") {
  Vec e1(2);
  e1 << 1.0, 0.0;
  SampleOutcome z20{Eigen::Vector2i(2, 0), 2};
  SampleOutcome z02{Eigen::Vector2i(0, 2), 2};
  CHECK(multinomial_mass(z20, e1) == 1.0);  // 0^0 = 1
  CHECK(multinomial_mass(z02, e1) == 0.0);
}

TEST_CASE("normalization, mean, covariance identities over full enumeration") {
  struct Case {
    int n, k;
    Vec x;
  };
  std::vector<Case> cases;
  {
    Vec a(2);
    a << 0.3, 0.7;
    cases.push_back({2, 512, a});
    Vec b(3);
    b << 0.2, 0.3, 0.5;
    cases.push_back({3, 4, b});
    cases.push_back({3, 64, b});
    Vec c(4);
    c << 0.1, 0.2, 0.3, 0.4;
    cases.push_back({4, 24, c});
  }
  for (const auto& cse : cases) {
    const auto table = make_outcome_table(cse.n, cse.k);
    std::vector<double> masses;
    multinomial_masses(table, cse.x, masses);

    double total = 0.0;
    Vec mean = Vec::Zero(cse.n);
    Mat cov = Mat::Zero(cse.n, cse.n);
    for (std::size_t m = 0; m < masses.size(); ++m) {
      total += masses[m];
      mean += masses[m] * table.states[m];
    }
    for (std::size_t m = 0; m < masses.size(); ++m) {
      const Vec d = table.states[m] - cse.x;
      cov += masses[m] * (d * d.transpose());
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK((mean - cse.x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((cov - covariance(cse.x) / cse.k).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("covariance matrix structure") {
  Vec e1(2);
  e1 << 1.0, 0.0;
  CHECK(covariance(e1).cwiseAbs().maxCoeff() == 0.0);

  Vec half(2);
  half << 0.5, 0.5;
  const Mat s = covariance(half);
  CHECK(s(0, 0) == doctest::Approx(0.25));
  CHECK(s(0, 1) == doctest::Approx(-0.25));
  CHECK(s(1, 1) == doctest::Approx(0.25));

  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec x = oracles::random_interior_state(rng, 4);
    const Mat sigma = covariance(x);
    CHECK((sigma - sigma.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sigma * Vec::Ones(4)).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("lattices") {
  CHECK(barycentric_lattice(3, 15).size() == 136);  // C(17,2)
  const auto interior = interior_lattice(3, 15);
  CHECK(interior.size() == 91);  // C(14,2)
  for (const auto& p : interior) CHECK(p.minCoeff() >= 1.0 / 15 - 1e-15);
  CHECK(interior_lattice(3, 10).size() == 36);
}
