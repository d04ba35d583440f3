#include <cmath>
#include <random>

#include "doctest.h"
#include "unihead/errors.hpp"
#include "unihead/sphere.hpp"

using namespace unihead;
using doctest::Approx;

namespace {
Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}
}  // namespace

TEST_CASE("project_to_sphere") {
  auto p = project_to_sphere(v3(1, 0, 0));
  CHECK(p[0] == 1.0);
  Vec w(2);
  w << 3, 4;
  auto q = project_to_sphere(w);
  CHECK(q[0] == Approx(0.6).epsilon(1e-15));
  CHECK(q[1] == Approx(0.8).epsilon(1e-15));
  CHECK_THROWS_AS(project_to_sphere(v3(0, 0, 0)), DegenerateInput);
}

TEST_CASE("geodesic_distance") {
  auto x = project_to_sphere(v3(1, 2, 3));
  CHECK(geodesic_distance(x, x) == Approx(0.0));
  CHECK(geodesic_distance(x, project_to_sphere(-x.coords())) == Approx(M_PI));
  CHECK(geodesic_distance(project_to_sphere(v3(1, 0, 0)), project_to_sphere(v3(0, 1, 0))) ==
        Approx(M_PI / 2));
  Vec w(2);
  w << 1, 0;
  CHECK_THROWS_AS(geodesic_distance(x, project_to_sphere(w)), DimensionMismatch);

  auto pts = uniform_sphere_sample(3, 300, 5);
  for (int i = 0; i + 2 < 300; i += 3) {
    const double ab = geodesic_distance(pts[i], pts[i + 1]);
    CHECK(ab == Approx(geodesic_distance(pts[i + 1], pts[i])).epsilon(1e-12));
    CHECK(geodesic_distance(pts[i], pts[i + 2]) <=
          ab + geodesic_distance(pts[i + 1], pts[i + 2]) + 1e-9);
  }
}

TEST_CASE("surface_area and cap_area") {
  CHECK(surface_area(1) == Approx(2 * M_PI).epsilon(1e-14));
  CHECK(surface_area(2) == Approx(4 * M_PI).epsilon(1e-14));
  CHECK(surface_area(3) == Approx(2 * M_PI * M_PI).epsilon(1e-14));
  CHECK_THROWS_AS(surface_area(0), DomainError);
  for (int m : {1, 2, 5, 9}) CHECK(cap_area(m, 1.0) == Approx(surface_area(m) / 2).epsilon(1e-12));
  CHECK(cap_area(2, 0.5) == Approx(M_PI).epsilon(1e-12));
  for (double d : {0.01, 0.3, 0.9}) CHECK(cap_area(2, d) == Approx(2 * M_PI * d).epsilon(1e-12));
  CHECK(cap_area(4, 1e-12) < 1e-20);
  CHECK_THROWS_AS(cap_area(2, 0.0), DomainError);
  CHECK_THROWS_AS(cap_area(2, 1.5), DomainError);
}

TEST_CASE("equal_area_partition small cases") {
  auto p1 = equal_area_partition(3, 1, 0);
  REQUIRE(p1.size() == 1);
  CHECK(p1.cells[0].measure == Approx(surface_area(3)));
  auto p2 = equal_area_partition(2, 2, 0);
  REQUIRE(p2.size() == 2);
  for (const auto& c : p2.cells) CHECK(c.measure == Approx(2 * M_PI).epsilon(1e-12));
  CHECK_THROWS_AS(equal_area_partition(2, 0, 0), DomainError);
}

TEST_CASE("equal_area_partition invariants") {
  for (int m : {1, 2, 3, 4}) {
    for (int N : {7, 64, 500}) {
      auto p = equal_area_partition(m, N, 11);
      REQUIRE(static_cast<int>(p.size()) == N);
      double total = 0.0;
      for (const auto& c : p.cells) {
        total += c.measure;
        CHECK(std::fabs(c.measure / (surface_area(m) / N) - 1.0) <= 1e-9);
        CHECK(c.radius_bound <= M_PI);
        CHECK(std::fabs(c.center.coords().norm() - 1.0) <= 1e-12);
      }
      CHECK(std::fabs(total / surface_area(m) - 1.0) <= 1e-6);
      // every center lies in its own cell
      for (std::size_t k = 0; k < p.size(); ++k) CHECK(p.locate(p.cells[k].center) == k);
    }
  }
}

TEST_CASE("partition cell membership by Monte Carlo") {
  const int N = 100, n = 1000000;
  auto p = equal_area_partition(2, N, 3);
  auto xs = uniform_sphere_sample(2, n, 99);
  std::vector<int> count(N, 0);
  std::vector<double> maxdist(N, 0.0);
  for (const auto& x : xs) {
    const auto k = p.locate(x);
    ++count[k];
    maxdist[k] = std::max(maxdist[k], geodesic_distance(x, p.cells[k].center));
  }
  const double mean = double(n) / N, sd = std::sqrt(n * 0.01 * 0.99);
  // Bonferroni over 100 cells: 4 sd gives a false alarm rate below 1%.
  for (int k = 0; k < N; ++k) {
    CHECK(std::fabs(count[k] - mean) <= 4 * sd);
    CHECK(maxdist[k] <= p.cells[k].radius_bound + 1e-12);
  }
}

TEST_CASE("random partition mode is flagged as estimated") {
  auto p = equal_area_partition(2, 50, 4, PartitionMode::Random);
  CHECK(p.estimated);
  double total = 0.0;
  for (const auto& c : p.cells) total += c.measure;
  CHECK(std::fabs(total / surface_area(2) - 1.0) <= 1e-6);
}

TEST_CASE("uniform_sphere_sample") {
  auto a = uniform_sphere_sample(2, 1000000, 7);
  Vec mean = Vec::Zero(3);
  for (const auto& x : a) {
    mean += x.coords();
  }
  for (int i = 0; i < 1000; ++i) CHECK(std::fabs(a[i].coords().norm() - 1.0) <= 1e-12);
  mean /= double(a.size());
  CHECK(mean.norm() <= 0.004);
  auto b = uniform_sphere_sample(2, 1000, 7);
  for (int i = 0; i < 1000; ++i) CHECK(b[i].coords() == a[i].coords());
}

TEST_CASE("stereographic maps") {
  auto s = stereographic_inverse(Vec::Zero(2));
  CHECK(s[0] == 0.0);
  CHECK(s[1] == 0.0);
  CHECK(s[2] == -1.0);
  Vec w(2);
  w << 1, 0;
  auto y = stereographic(project_to_sphere(w));
  REQUIRE(y.size() == 1);
  CHECK(y[0] == Approx(1.0));
  CHECK_THROWS_AS(stereographic(project_to_sphere(v3(0, 0, 1))), PoleSingularity);
  auto pts = uniform_sphere_sample(3, 100, 21);
  for (const auto& x : pts) {
    auto back = stereographic_inverse(stereographic(x));
    CHECK((back.coords() - x.coords()).norm() <= 1e-10);
  }
  std::mt19937_64 g(1);
  std::normal_distribution<double> nd(0.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    Vec v(4);
    for (int j = 0; j < 4; ++j) v[j] = nd(g);
    CHECK(std::fabs(stereographic_inverse(v).coords().norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("partition json") {
  auto p = equal_area_partition(2, 4, 0);
  nlohmann::json j = p;
  CHECK(j["m"] == 2);
  CHECK(j["cells"].size() == 4);
  CHECK(j["cells"][0].contains("center"));
  CHECK(j["cells"][0].contains("measure"));
  CHECK(j["cells"][0].contains("radius_bound"));
}
