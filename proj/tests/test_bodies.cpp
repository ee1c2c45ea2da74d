#include <doctest.h>

#include <cmath>

#include "csamp/bodies.hpp"
#include "csamp/errors.hpp"
#include "test_oracles.hpp"

using namespace csamp;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

Polytope triangle_polytope() {
  Eigen::MatrixXd A(3, 2);
  A << 1, 1, -1, 0, 0, -1;
  Eigen::VectorXd b(3);
  b << 1.5, 1.5, 1.5;
  return Polytope(A, b, 3.0);
}

}  // namespace

TEST_CASE("membership answers") {
  Ball ball(2, 2.0);
  CHECK(ball.contains(vec2(1, 0)));

  Box box(Eigen::VectorXd::Constant(2, -1.0), Eigen::VectorXd::Constant(2, 1.0));
  CHECK_FALSE(box.contains(vec2(1.5, 0)));

  Polytope poly = triangle_polytope();
  CHECK_FALSE(poly.contains(vec2(2, 0)));  // row 1: 2 + 0 > 1.5
  CHECK(poly.contains(vec2(0, 0)));

  CHECK_THROWS_AS((void)ball.contains(Eigen::VectorXd::Zero(3)), DimensionMismatchError);
}

TEST_CASE("projection answers") {
  Ball ball(2, 1.0);
  CHECK((ball.project(vec2(2, 0)) - vec2(1, 0)).norm() < 1e-14);

  Box box(Eigen::VectorXd::Constant(2, -1.0), Eigen::VectorXd::Constant(2, 1.0));
  CHECK((box.project(vec2(2, -3)) - vec2(1, -1)).norm() < 1e-14);

  // proj_K(y) = y for y in K, for every projection-capable body.
  Rng rng(11);
  Ellipsoid ell((Eigen::VectorXd(2) << 2.0, 1.5).finished());
  const ConvexBody* bodies[] = {&ball, &box, &ell};
  for (const ConvexBody* b : bodies) {
    for (int i = 0; i < 200; ++i) {
      Eigen::VectorXd y = oracle::uniform_on_body(*b, rng);
      CHECK((b->project(y) - y).norm() == 0.0);
    }
  }

  Polytope poly = triangle_polytope();
  CHECK_THROWS_AS((void)poly.project(vec2(0, 0)), CapabilityMissingError);
}

TEST_CASE("separation answers") {
  Ball ball(2, 2.0);
  SeparationAnswer a = ball.separate((Eigen::VectorXd(2) << 3, 0).finished());
  REQUIRE_FALSE(a.in_body);
  CHECK((a.normal - vec2(1, 0)).norm() < 1e-14);

  Box box(Eigen::VectorXd::Constant(2, -1.0), Eigen::VectorXd::Constant(2, 1.0));
  CHECK(box.separate(vec2(0, 0)).in_body);

  Polytope poly = triangle_polytope();
  SeparationAnswer p = poly.separate(vec2(2, 0));
  REQUIRE_FALSE(p.in_body);
  CHECK((p.normal - vec2(1, 1) / std::sqrt(2.0)).norm() < 1e-14);

  // Hyperplane validity: <g, x - y> >= 0 over sampled y in K.
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd y = oracle::uniform_on_body(poly, rng);
    CHECK(p.normal.dot(vec2(2, 0) - y) >= -1e-9);
  }
}

TEST_CASE("geometry validation") {
  GeometrySummary g = validate_geometry(Ball(2, 2.0));
  CHECK(g.inradius == doctest::Approx(2.0));
  CHECK(g.circumradius == doctest::Approx(2.0));
  CHECK(g.diameter == doctest::Approx(4.0));
  CHECK(g.lsi_heuristic == doctest::Approx(16.0));
  CHECK(*g.minwidth == doctest::Approx(4.0));
  CHECK(*g.gamma == doctest::Approx(0.5));

  GeometrySummary cube = validate_geometry(
      Box(Eigen::VectorXd::Constant(3, -1.0), Eigen::VectorXd::Constant(3, 1.0)));
  CHECK(cube.inradius == doctest::Approx(1.0));
  CHECK(cube.circumradius == doctest::Approx(std::sqrt(3.0)));
  CHECK(*cube.minwidth == doctest::Approx(2.0));
  CHECK(*cube.gamma == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(cube.pi_heuristic == doctest::Approx(12.0 * std::log(3.0)));

  CHECK_THROWS_AS(Ball(2, 0.5), A1ViolationError);
  CHECK_THROWS_AS(Polytope(Eigen::MatrixXd::Identity(2, 2),
                           (Eigen::VectorXd(2) << 1.0, -0.5).finished(), 2.0),
                  A1ViolationError);

  Polytope poly = triangle_polytope();
  CHECK(poly.inradius() == doctest::Approx(1.5 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_FALSE(validate_geometry(poly).minwidth.has_value());
}

TEST_CASE("exact uniform sampling moments") {
  Rng rng(21);
  const int n = 100000;

  Ball ball3(3, 1.0);
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) sum_sq += ball3.sample_exact_uniform(rng).squaredNorm();
  CHECK(sum_sq / n == doctest::Approx(0.6).epsilon(0.017));  // d R^2/(d+2)

  Box box3(Eigen::VectorXd::Constant(3, -1.0), Eigen::VectorXd::Constant(3, 1.0));
  sum_sq = 0.0;
  for (int i = 0; i < n; ++i) sum_sq += box3.sample_exact_uniform(rng).squaredNorm();
  CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.01));  // d/3

  Ball ball2(2, 1.0);
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (int i = 0; i < n; ++i) mean += ball2.sample_exact_uniform(rng);
  mean /= n;
  CHECK(std::abs(mean[0]) < 0.01);
  CHECK(std::abs(mean[1]) < 0.01);

  Polytope poly = triangle_polytope();
  CHECK_THROWS_AS((void)poly.sample_exact_uniform(rng), CapabilityMissingError);
}

TEST_CASE("projection properties") {
  Rng rng(31);
  Ball ball(3, 2.0);
  Box box((Eigen::VectorXd(3) << -1, -2, -1.5).finished(),
          (Eigen::VectorXd(3) << 2, 1, 1.25).finished());
  Ellipsoid ell((Eigen::VectorXd(3) << 2.0, 1.5, 1.25).finished());
  const ConvexBody* bodies[] = {&ball, &box, &ell};

  for (const ConvexBody* b : bodies) {
    const double R = b->circumradius();
    for (int i = 0; i < 500; ++i) {
      Eigen::VectorXd y = 3.0 * R * rng.gaussian_vector(3);
      Eigen::VectorXd p = b->project(y);
      CHECK(b->contains(p * (1.0 - 1e-12)));  // projected point lies in K
      // Idempotence.
      CHECK((b->project(p) - p).norm() <= 1e-10 * R);
      // Non-expansiveness.
      Eigen::VectorXd y2 = 3.0 * R * rng.gaussian_vector(3);
      CHECK((p - b->project(y2)).norm() <= (y - y2).norm() + 1e-9);
      // Obtuse-angle inequality against exact-uniform interior points.
      if (b->has(Capability::exact_uniform)) {
        Eigen::VectorXd x = b->sample_exact_uniform(rng);
        CHECK((x - p).dot(p - y) >= -1e-9);
      }
    }
  }
}

TEST_CASE("separation properties over the body zoo") {
  Rng rng(41);
  Ball ball(2, 2.0);
  Box box(Eigen::VectorXd::Constant(2, -1.0), Eigen::VectorXd::Constant(2, 1.0));
  Ellipsoid ell((Eigen::VectorXd(2) << 2.0, 1.25).finished());
  Polytope poly = triangle_polytope();
  const ConvexBody* bodies[] = {&ball, &box, &ell, &poly};

  for (const ConvexBody* b : bodies) {
    for (int i = 0; i < 300; ++i) {
      Eigen::VectorXd x = 2.5 * b->circumradius() * rng.gaussian_vector(2);
      SeparationAnswer a = b->separate(x);
      CHECK(a.in_body == b->contains(x));
      if (!a.in_body) {
        CHECK(a.normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
        for (int j = 0; j < 30; ++j) {
          Eigen::VectorXd y = oracle::uniform_on_body(*b, rng);
          CHECK(a.normal.dot(x - y) >= -1e-9);
        }
      }
    }
  }
}

TEST_CASE("ellipsoid projection is accurate") {
  // First-order optimality: y - proj is parallel to the constraint gradient.
  Rng rng(51);
  Ellipsoid ell((Eigen::VectorXd(3) << 2.0, 1.5, 1.25).finished());
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd y = 4.0 * rng.gaussian_vector(3);
    if (ell.contains(y)) continue;
    Eigen::VectorXd p = ell.project(y);
    const double level =
        (p.array().square() / ell.semi_axes().array().square()).sum();
    CHECK(level == doctest::Approx(1.0).epsilon(1e-9));
    Eigen::VectorXd grad = (p.array() / ell.semi_axes().array().square()).matrix();
    Eigen::VectorXd resid = y - p;
    const double cosine = resid.dot(grad) / (resid.norm() * grad.norm());
    CHECK(cosine == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("body JSON loading") {
  auto ball = load_body_json(R"({"type": "ball", "d": 2, "radius": 2.0})");
  CHECK(ball->type_name() == "ball");
  CHECK(ball->dimension() == 2);
  CHECK(ball->circumradius() == doctest::Approx(2.0));

  auto box = load_body_json(R"({"type": "box", "d": 2, "bounds": [[-1,1],[-2,2]]})");
  CHECK(box->inradius() == doctest::Approx(1.0));

  auto poly = load_body_json(
      R"({"type": "polytope", "d": 2, "A": [[1,1],[-1,0],[0,-1]], "b": [1.5,1.5,1.5],
          "circumradius": 3.0})");
  CHECK(poly->has(Capability::separation));
  CHECK_FALSE(poly->has(Capability::projection));

  auto ell = load_body_json(R"({"type": "ellipsoid", "d": 2, "semi_axes": [2.0, 1.5]})");
  CHECK(ell->minwidth().value() == doctest::Approx(3.0));

  CHECK_THROWS_AS(load_body_json(R"({"type": "cone", "d": 2})"), InvalidConfigError);
  CHECK_THROWS_AS(load_body_json(R"({"type": "ball", "d": 2, "radius": 0.25})"),
                  A1ViolationError);
  CHECK_THROWS(load_body_json("not json"));
}

TEST_CASE("counting and restricted wrappers") {
  Ball ball(2, 2.0);
  CountingBody counted(ball);
  (void)counted.contains(vec2(0, 0));
  (void)counted.project(vec2(3, 0));
  (void)counted.separate(vec2(3, 0));
  CHECK(counted.membership_calls() == 1);
  CHECK(counted.projection_calls() == 1);
  CHECK(counted.separation_calls() == 1);

  RestrictedBody sep_only(ball, capability_mask(Capability::membership) |
                                    capability_mask(Capability::separation));
  CHECK(sep_only.has(Capability::separation));
  CHECK_FALSE(sep_only.has(Capability::projection));
  CHECK_THROWS_AS((void)sep_only.project(vec2(3, 0)), CapabilityMissingError);
}
