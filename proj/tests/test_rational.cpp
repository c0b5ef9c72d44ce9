#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "bfmatch/network.hpp"
#include "bfmatch/rational.hpp"
#include "bfmatch/scenario.hpp"

using namespace bfmatch;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Chu load in rational form for the bundled single-antenna scenario.
RationalFunction chu_fixture() {
  return chu_scattering_rational(single_chu_scenario(4.2e9));
}

constexpr double kChuK = 1.4309899684000725e-11;  // a/c for a = 4.29 mm

}  // namespace

TEST_CASE("evaluate reproduces closed-form values") {
  const RationalFunction chu = chu_fixture();
  const cplx at0 = evaluate(chu, cplx{0.0, 0.0});
  CHECK_THAT(at0.real(), WithinRel(1.0, 1e-12));
  CHECK_THAT(at0.imag(), WithinAbs(0.0, 1e-12));

  const cplx at_fc = evaluate_at_frequency(chu, 7e9);
  CHECK_THAT(std::abs(at_fc), WithinRel(0.78382552536702943, 1e-12));

  RationalFunction simple;
  simple.zeros = {cplx{1.0, 0.0}};
  simple.poles = {cplx{-1.0, 0.0}};
  simple.gain = 1.0;
  const cplx v = evaluate(simple, cplx{0.0, 0.0});
  CHECK_THAT(v.real(), WithinRel(-1.0, 1e-15));
}

TEST_CASE("evaluate at a pole is a singularity error") {
  RationalFunction fn;
  fn.poles = {cplx{-2.0, 0.0}};
  fn.gain = 1.0;
  CHECK_THROWS_AS(evaluate(fn, cplx{-2.0, 0.0}), std::domain_error);
}

TEST_CASE("conjugate symmetry of real-coefficient functions") {
  const RationalFunction chu = chu_fixture();
  for (double f : {1e9, 3.3e9, 7e9, 1.2e10}) {
    const cplx s{0.4e10, 2.0 * kPi * f};
    const cplx a = evaluate(chu, std::conj(s));
    const cplx b = std::conj(evaluate(chu, s));
    CHECK_THAT(std::abs(a - b), WithinAbs(0.0, 1e-9 * std::abs(b)));
  }
}

TEST_CASE("flip negates the argument") {
  RationalFunction fn;  // 1/(1+s)
  fn.poles = {cplx{-1.0, 0.0}};
  fn.gain = 1.0;
  const RationalFunction g = flip(fn);
  for (double s : {-0.5, 0.0, 0.3, 2.0}) {
    const cplx got = evaluate(g, cplx{s, 0.0});
    CHECK_THAT(got.real(), WithinRel(1.0 / (1.0 - s), 1e-12));
    CHECK_THAT(got.imag(), WithinAbs(0.0, 1e-15));
  }

  const RationalFunction chu = chu_fixture();
  const cplx lhs = evaluate(flip(chu), cplx{2.0, 0.0});
  const cplx rhs = evaluate(chu, cplx{-2.0, 0.0});
  CHECK_THAT(std::abs(lhs - rhs), WithinAbs(0.0, 1e-12 * std::abs(rhs)));
}

TEST_CASE("flip is an involution on pole and zero multisets") {
  RationalFunction fn;
  fn.zeros = {cplx{-0.3, 0.9}, cplx{-0.3, -0.9}};
  fn.poles = {cplx{-1.0, 0.0}, cplx{-2.0, 2.0}, cplx{-2.0, -2.0}};
  fn.gain = 0.7;
  const RationalFunction back = flip(flip(fn));
  REQUIRE(back.zeros.size() == fn.zeros.size());
  REQUIRE(back.poles.size() == fn.poles.size());
  CHECK_THAT(back.gain, WithinRel(fn.gain, 1e-15));
  for (size_t i = 0; i < fn.poles.size(); ++i)
    CHECK_THAT(std::abs(back.poles[i] - fn.poles[i]), WithinAbs(0.0, 1e-15));
}

TEST_CASE("poles_zeros returns the stored conjugate-closed multisets") {
  const RationalFunction chu = chu_fixture();
  const auto [zeros, poles] = poles_zeros(chu);
  CHECK(zeros.empty());
  REQUIRE(poles.size() == 2);
  for (const cplx& p : poles) CHECK(p.real() < 0.0);
  CHECK_THAT(std::abs(poles[0] - std::conj(poles[1])), WithinAbs(0.0, 1e-6 * std::abs(poles[0])));
  CHECK(is_stable(chu));
}

TEST_CASE("log Taylor coefficients match the Chu closed forms") {
  const RationalFunction chu = chu_fixture();
  const auto c = log_taylor_coefficients(chu, cplx{0.0, 0.0}, 4);
  REQUIRE(c.size() == 4);
  CHECK_THAT(std::abs(c[0]), WithinAbs(0.0, 1e-15));
  CHECK_THAT(c[1].real(), WithinRel(2.861979936800145e-11, 1e-12));
  CHECK_THAT(c[1].real(), WithinRel(2.0 * kChuK, 1e-9));
  CHECK_THAT(std::abs(c[1].imag()), WithinAbs(0.0, 1e-24));
  CHECK_THAT(std::abs(c[2]), WithinAbs(0.0, 1e-30));
  CHECK_THAT(-c[3].real(), WithinRel(3.907045819299625e-33, 1e-12));
  CHECK_THAT(-c[3].real(), WithinRel(4.0 * kChuK * kChuK * kChuK / 3.0, 1e-9));
}

TEST_CASE("log Taylor of the constant-one function vanishes") {
  RationalFunction one;
  one.gain = 1.0;
  for (const cplx& c : log_taylor_coefficients(one, cplx{0.5, 0.2}, 5))
    CHECK_THAT(std::abs(c), WithinAbs(0.0, 1e-15));
}

TEST_CASE("log Taylor throws when the function vanishes at the center") {
  RationalFunction fn;
  fn.zeros = {cplx{0.5, 0.0}};
  fn.gain = 2.0;
  CHECK_THROWS_AS(log_taylor_coefficients(fn, cplx{0.5, 0.0}, 3), std::domain_error);
}

TEST_CASE("log Taylor agrees with central finite differences on a scaled load") {
  // Singularities within ~1e-3 of the center keep c2, c3 large enough that
  // the fixed 1e-6 step dominates double-precision roundoff.
  RationalFunction fn;
  fn.zeros = {cplx{-1e-3, 1e-3}, cplx{-1e-3, -1e-3}};
  fn.poles = {cplx{-2e-3, 0.0}, cplx{-1.5e-3, 2e-3}, cplx{-1.5e-3, -2e-3}};
  fn.gain = 0.3;
  const cplx center{0.0, 0.0};
  const auto c = log_taylor_coefficients(fn, center, 4);

  auto g = [&](double ds) { return std::log(1.0 / evaluate(fn, center + cplx{ds, 0.0})); };
  const double h = 1e-6 * (1.0 + std::abs(center));
  const cplx g0 = g(0.0), gp = g(h), gm = g(-h), gpp = g(2.0 * h), gmm = g(-2.0 * h);
  const cplx fd1 = (gp - gm) / (2.0 * h);
  const cplx fd2 = (gp - 2.0 * g0 + gm) / (h * h);
  const cplx fd3 = (gpp - 2.0 * gp + 2.0 * gm - gmm) / (2.0 * h * h * h);

  CHECK_THAT(std::abs(c[1] - fd1), WithinAbs(0.0, 1e-4 * std::abs(fd1)));
  CHECK_THAT(std::abs(c[2] - fd2 / 2.0), WithinAbs(0.0, 1e-4 * std::abs(fd2 / 2.0)));
  CHECK_THAT(std::abs(c[3] - fd3 / 6.0), WithinAbs(0.0, 1e-4 * std::abs(fd3 / 6.0)));
}

TEST_CASE("reflection equation: Chu load gives a quadruple origin root") {
  const auto roots = reflection_equation_roots(chu_fixture());
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].root == cplx{0.0, 0.0});
  CHECK(roots[0].multiplicity == 4);
}

TEST_CASE("reflection equation: constant reflective magnitude below one has no roots") {
  RationalFunction half;
  half.gain = 0.5;
  CHECK(reflection_equation_roots(half).empty());
}

TEST_CASE("reflection equation: all-pass load is rejected") {
  RationalFunction one;
  one.gain = 1.0;
  CHECK_THROWS_AS(reflection_equation_roots(one), std::domain_error);
}

TEST_CASE("reflection equation: first-order load gives a double origin root") {
  RationalFunction fn;  // 1/(s+1)
  fn.poles = {cplx{-1.0, 0.0}};
  fn.gain = 1.0;
  const auto roots = reflection_equation_roots(fn);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].root == cplx{0.0, 0.0});
  CHECK(roots[0].multiplicity == 2);
}

TEST_CASE("reflection equation: series-R parallel-LC load gives imaginary-axis pair") {
  // Z(s) = 1 + s/(s^2+1) at unit reference: S = s/(2s^2+s+2)
  RationalFunction fn;
  fn.zeros = {cplx{0.0, 0.0}};
  const double disc = std::sqrt(15.0);
  fn.poles = {cplx{-0.25, disc / 4.0}, cplx{-0.25, -disc / 4.0}};
  fn.gain = 0.5;
  const auto st = analyze_reflection(fn);
  REQUIRE(st.s_roots.size() == 2);
  CHECK(st.infinity_deficiency == 0);
  for (const auto& rm : st.s_roots) {
    CHECK(rm.multiplicity == 2);
    CHECK_THAT(rm.root.real(), WithinAbs(0.0, 1e-9));
    CHECK_THAT(std::abs(rm.root.imag()), WithinRel(1.0, 1e-9));
  }
}

TEST_CASE("reflection equation: parallel-RC load pushes the root to infinity") {
  // S(s) = -s/(s+2) for R = C = 1
  RationalFunction fn;
  fn.zeros = {cplx{0.0, 0.0}};
  fn.poles = {cplx{-2.0, 0.0}};
  fn.gain = -1.0;
  const auto st = analyze_reflection(fn);
  CHECK(st.s_roots.empty());
  CHECK(st.infinity_deficiency == 1);
}

TEST_CASE("reflection root list is closed under negation and conjugation") {
  RationalFunction fn;
  fn.zeros = {cplx{-0.6, 0.0}};
  fn.poles = {cplx{-1.0, 0.7}, cplx{-1.0, -0.7}};
  fn.gain = 0.4;
  const auto roots = reflection_equation_roots(fn);
  for (const auto& rm : roots) {
    if (rm.root == cplx{0.0, 0.0}) continue;
    bool has_neg = false, has_conj = false;
    for (const auto& other : roots) {
      if (std::abs(other.root + rm.root) < 1e-9 * (1.0 + std::abs(rm.root))) has_neg = true;
      if (std::abs(other.root - std::conj(rm.root)) < 1e-9 * (1.0 + std::abs(rm.root)))
        has_conj = true;
    }
    CHECK(has_neg);
    CHECK(has_conj);
  }
}

TEST_CASE("passivity sweep of the Chu load stays below one") {
  const RationalFunction chu = chu_fixture();
  CHECK(passivity_max(chu, 1e6, 2.8e10, 10001) <= 1.0 + 1e-9);
}
