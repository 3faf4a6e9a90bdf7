#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "qsc/bounds.hpp"

using namespace qsc;

namespace {

template <class F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("classical bound pins the stretch constant") {
  // -2 log2(0.99^2/4 - sqrt(0.02)) - 1, evaluated once by hand
  const double stretch = 5.541706702144312;
  for (int n = 1; n <= 12; ++n) {
    BoundReport r = classical_bound(n, 1, 0.01, 0.01);
    CHECK(r.argument_valid);
    CHECK(std::abs(r.rhs - n - stretch) <= 1e-9);
    CHECK(r.kind == "classical");
  }
  BoundReport exact = classical_bound(5, 1, 0.0, 0.0);
  CHECK(exact.rhs == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(exact.argument == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("quantum bound doubles the resource term") {
  for (int n = 1; n <= 8; ++n) {
    BoundReport c = classical_bound(n, 1, 0.01, 0.01);
    BoundReport q = quantum_bound(n, 1, 0.01, 0.01);
    CHECK(q.kind == "quantum");
    CHECK(std::abs(q.rhs - (c.rhs + n)) <= 1e-9);
    const double stretch = q.rhs - 2.0 * n;
    CHECK(stretch > 5.0);
    CHECK(stretch < 6.0);
  }
  BoundReport q0 = quantum_bound(3, 1, 0.0, 0.0);
  CHECK(q0.rhs == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("vacuous arguments are reported explicitly") {
  BoundReport flat = classical_bound(4, 1, 0.0, 1.0);
  CHECK_FALSE(flat.argument_valid);
  CHECK(flat.satisfied);
  CHECK(std::isinf(flat.rhs));
  CHECK(std::isinf(flat.margin));

  BoundReport noisy = classical_bound(4, 1, 0.05, 0.01);
  CHECK_FALSE(noisy.argument_valid);
  CHECK(noisy.argument <= 0.0);
  CHECK(noisy.satisfied);
}

TEST_CASE("satisfaction tracks the margin sign") {
  BoundReport tight = classical_bound(4, 7, 0.0, 0.0);
  CHECK(tight.satisfied);
  CHECK(tight.margin == doctest::Approx(0.0).epsilon(1e-14));

  BoundReport broken = classical_bound(4, 8, 0.0, 0.0);
  CHECK_FALSE(broken.satisfied);
  CHECK(broken.margin == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(broken.ell == 8);
}

TEST_CASE("bounds are monotone over the parameter grid") {
  const int steps = 50;
  double prev_n = 0.0;
  for (int n = 1; n <= 6; ++n) {
    BoundReport r = classical_bound(n, 1, 0.005, 0.1);
    CHECK(r.rhs > prev_n);
    prev_n = r.rhs;
  }
  for (int i = 0; i < steps; ++i) {
    double prev = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < steps; ++j) {
      double eps = 0.02 * i / (steps - 1);
      double delta = 0.9 * j / (steps - 1);
      BoundReport r = classical_bound(4, 1, eps, delta);
      if (!r.argument_valid) continue;
      CHECK(r.rhs >= prev - 1e-12);
      prev = r.rhs;
    }
  }
  for (int j = 0; j < steps; ++j) {
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < steps; ++i) {
      double eps = 0.02 * i / (steps - 1);
      double delta = 0.9 * j / (steps - 1);
      BoundReport r = quantum_bound(4, 1, eps, delta);
      if (!r.argument_valid) continue;
      CHECK(r.rhs >= prev - 1e-12);
      prev = r.rhs;
    }
  }
}

TEST_CASE("bound inputs are validated") {
  CHECK(contains(thrown_message([] { classical_bound(0, 1, 0.0, 0.0); }),
                 "n must"));
  CHECK(contains(thrown_message([] { classical_bound(1, 0, 0.0, 0.0); }),
                 "ell must"));
  CHECK(contains(thrown_message([] { classical_bound(1, 1, -0.1, 0.0); }),
                 "epsilon"));
  CHECK(contains(thrown_message([] { quantum_bound(1, 1, 0.0, 1.5); }),
                 "delta"));
  double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(contains(thrown_message([&] { classical_bound(1, 1, nan, 0.0); }),
                 "epsilon"));
}

TEST_CASE("entropy gap is tight on the copy protocol") {
  for (int ell = 1; ell <= 3; ++ell) {
    EntropyGapReport r =
        entropy_gap_check(builtin_protocol("trivial:" + std::to_string(ell)));
    CHECK(r.kind == "classical_bc");
    CHECK(r.capacity == doctest::Approx(ell).epsilon(1e-14));
    CHECK(std::abs(r.hmin_b - ell) <= 1e-6);
    CHECK(std::abs(r.hmin_bc) <= 1e-6);
    CHECK(std::abs(r.slack) <= 1e-5);
    CHECK(r.holds);
  }
}

TEST_CASE("entropy gap holds across the built-ins") {
  EntropyGapReport sd = entropy_gap_check(builtin_protocol("superdense"));
  CHECK(sd.kind == "qubit_bc");
  CHECK(sd.capacity == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(sd.hmin_b - 2.0) <= 1e-6);
  CHECK(std::abs(sd.hmin_bc) <= 1e-6);
  CHECK(sd.holds);

  EntropyGapReport hc =
      entropy_gap_check(builtin_protocol("hashed_compression"));
  CHECK(hc.kind == "classical_bc");
  CHECK(hc.capacity == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(hc.hmin_b - 3.0) <= 1e-6);
  CHECK(std::abs(hc.hmin_bc - 1.0) <= 1e-6);
  CHECK(hc.holds);

  EntropyGapReport na =
      entropy_gap_check(builtin_protocol("naive_angle_qubit"));
  CHECK(na.kind == "none");
  CHECK(na.capacity == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(na.hmin_b - na.hmin_bc) <= 1e-6);
  CHECK(na.holds);
}
