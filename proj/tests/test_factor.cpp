#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "wcs/factor.hpp"

using namespace wcs;

namespace {

Factor make(std::vector<Var> scope, std::vector<int> cards, std::vector<double> values) {
  return Factor(std::move(scope), std::move(cards), Eigen::Map<Eigen::VectorXd>(values.data(), values.size()));
}

Factor random_factor(std::vector<Var> scope, std::vector<int> cards, std::mt19937_64& rng) {
  Eigen::Index size = 1;
  for (int c : cards) size *= c;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd t(size);
  for (Eigen::Index i = 0; i < size; ++i) t(i) = u(rng);
  return Factor(std::move(scope), std::move(cards), t);
}

}  // namespace

TEST_CASE("product with an identity factor") {
  Factor f = make({0}, {2}, {0.5, 0.5});
  Factor g = make({0}, {2}, {1, 1});
  Factor h = factor_product(f, g);
  CHECK(h.scope() == f.scope());
  CHECK(h.table().isApprox(f.table()));
}

TEST_CASE("product of disjoint scopes is the outer product") {
  Factor f = make({0}, {2}, {0.2, 0.8});
  Factor g = make({1}, {3}, {1, 2, 3});
  Factor h = factor_product(f, g);
  CHECK(h.scope() == std::vector<Var>{0, 1});
  Eigen::VectorXd expected(6);
  expected << 0.2, 0.4, 0.6, 0.8, 1.6, 2.4;
  CHECK(h.table().isApprox(expected));
}

TEST_CASE("product of chain3 CPT factors matches nested loops") {
  const BayesNet net = fixtures::chain3();
  Factor f2 = Factor::from_cpt(net, 1);  // (X1, X2)
  Factor f3 = Factor::from_cpt(net, 2);  // (X2, X3)
  Factor h = factor_product(f2, f3);
  REQUIRE(h.scope() == std::vector<Var>{0, 1, 2});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        CHECK(h.table()(a * 4 + b * 2 + c) == doctest::Approx(net.cpt(1).rows(a, b) * net.cpt(2).rows(b, c)));
}

TEST_CASE("random products match nested loops under scope reordering") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    Factor f = random_factor({3, 0, 2}, {2, 3, 2}, rng);
    Factor g = random_factor({2, 5, 3}, {2, 2, 2}, rng);
    Factor h = factor_product(f, g);
    std::vector<int> x(6, 0);
    for (x[0] = 0; x[0] < 3; ++x[0])
      for (x[2] = 0; x[2] < 2; ++x[2])
        for (x[3] = 0; x[3] < 2; ++x[3])
          for (x[5] = 0; x[5] < 2; ++x[5]) CHECK(h.at(x) == doctest::Approx(f.at(x) * g.at(x)).epsilon(1e-14));
  }
}

TEST_CASE("sum out") {
  Factor u = make({0, 1}, {2, 2}, {1, 1, 1, 1});
  Factor s = factor_sum_out(u, 1);
  CHECK(s.scope() == std::vector<Var>{0});
  CHECK(s.table().isApprox(Eigen::Vector2d(2, 2)));

  Factor single = make({4}, {3}, {0.1, 0.2, 0.3});
  Factor scalar = factor_sum_out(single, 4);
  CHECK(scalar.is_scalar());
  CHECK(scalar.scalar() == doctest::Approx(0.6));

  CHECK_THROWS_AS(factor_sum_out(single, 0), ParameterError);
}

TEST_CASE("random sum-out matches nested loops") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    Factor f = random_factor({1, 4, 2}, {3, 2, 2}, rng);
    Factor s = factor_sum_out(f, 4);
    std::vector<int> x(5, 0);
    for (x[1] = 0; x[1] < 3; ++x[1])
      for (x[2] = 0; x[2] < 2; ++x[2]) {
        double expected = 0.0;
        for (x[4] = 0; x[4] < 2; ++x[4]) expected += f.at(x);
        x[4] = 0;
        CHECK(s.at(x) == doctest::Approx(expected).epsilon(1e-14));
      }
  }
}

TEST_CASE("restrict slices observed variables") {
  std::mt19937_64 rng(3);
  Factor f = random_factor({0, 1, 2}, {2, 3, 2}, rng);
  Assignment a(3);
  a[1] = 2;
  Factor r = factor_restrict(f, a);
  CHECK(r.scope() == std::vector<Var>{0, 2});
  std::vector<int> x{0, 2, 0};
  for (x[0] = 0; x[0] < 2; ++x[0])
    for (x[2] = 0; x[2] < 2; ++x[2]) CHECK(r.at(x) == f.at(x));
}
