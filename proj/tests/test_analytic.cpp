#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mqw/analytic.hpp"

using namespace mqw;

namespace {

ModelParams make(double gamma, double u, double tau) {
  ModelParams params;
  params.gamma = gamma;
  params.u = u;
  params.tau = tau;
  return params;
}

// Independent oracle: direct summation of the truncated moments.
DetectionMoments summed(double c, int n_max, DetectionMode mode) {
  const double x = c * c;
  DetectionMoments m;
  for (int n = 1; n <= n_max; ++n) {
    const double p = mode == DetectionMode::FirstReturn ? fdr_pmf(c, n) : fdt_pmf(c, n);
    m.detection_probability += p;
    m.mean += n * p;
    m.second_moment += static_cast<double>(n) * n * p;
  }
  m.variance = m.second_moment - m.mean * m.mean;
  (void)x;
  return m;
}

}  // namespace

TEST_CASE("c parameter literals") {
  CHECK(c_parameter(make(3.0, 0.0, 0.4)) == doctest::Approx(0.3623577544766736).epsilon(1e-12));
  CHECK(c_parameter(make(-1.0, 0.0, 3.0)) == doctest::Approx(-0.9899924966004454).epsilon(1e-12));
}

TEST_CASE("return amplitude equals |c| without potential and deviates with it") {
  const ModelParams free_walk = make(3.0, 0.0, 0.4);
  CHECK(return_amplitude(free_walk) ==
        doctest::Approx(std::abs(c_parameter(free_walk))).epsilon(1e-15));
  const ModelParams tilted = make(2.0, 1.7, 0.9);
  CHECK(return_amplitude(tilted) == doctest::Approx(0.8445842858041201).epsilon(1e-12));
  CHECK(c_parameter(tilted) == doctest::Approx(-0.711476075326815).epsilon(1e-12));
  CHECK(return_amplitude(tilted) > std::abs(c_parameter(tilted)));
}

TEST_CASE("return amplitude and c parameter hit 1 together at a degeneracy") {
  // u chosen so sqrt(u^2 + gamma^2) tau = pi.
  const ModelParams params = make(1.0, 2.9781881070693568, 1.0);
  CHECK(std::abs(c_parameter(params)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(return_amplitude(params) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pmf values at c = 1/2") {
  const double c = 0.5;
  CHECK(fdr_pmf(c, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(fdr_pmf(c, 2) == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(fdr_pmf(c, 3) == doctest::Approx(0.140625).epsilon(1e-15));
  CHECK(fdt_pmf(c, 1) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(fdt_pmf(c, 2) == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(fdt_pmf(c, 3) == doctest::Approx(0.046875).epsilon(1e-15));
  CHECK_THROWS_AS(fdr_pmf(c, 0), std::invalid_argument);
  CHECK_THROWS_AS(fdt_pmf(1.5, 1), std::invalid_argument);
}

TEST_CASE("infinite-horizon values") {
  CHECK(mean_fdr(0.36235775447667357) == 2.0);
  CHECK(mean_fdr(1.0) == 1.0);
  CHECK(mean_fdr(-1.0) == 1.0);
  CHECK(mean_fdt(0.36235775447667357) == doctest::Approx(1.1511495535581266).epsilon(1e-12));
  CHECK(mean_fdt(1.0) == 0.0);
  CHECK(fdt_total(0.5) == 1.0);
  CHECK(fdt_total(1.0) == 0.0);
}

TEST_CASE("closed-form truncated moments match direct summation") {
  const double cs[] = {0.0, 0.1, 0.5, 0.9, 0.99, 0.999999};
  const int ns[] = {1, 2, 7, 40, 1000};
  for (double c : cs) {
    for (int n : ns) {
      for (DetectionMode mode : {DetectionMode::FirstReturn, DetectionMode::FirstTransition}) {
        const DetectionMoments closed = truncated_moments(c, n, mode);
        const DetectionMoments direct = summed(c, n, mode);
        const double scale = std::max(1.0, std::abs(direct.second_moment));
        CHECK(std::abs(closed.mean - direct.mean) / scale < 1e-10);
        CHECK(std::abs(closed.second_moment - direct.second_moment) / scale < 1e-10);
        CHECK(std::abs(closed.detection_probability - direct.detection_probability) < 1e-10);
      }
    }
  }
}

TEST_CASE("truncated moments at n = 1 are exact") {
  const double c = 0.77;
  const double x = c * c;
  const DetectionMoments fdr = truncated_moments(c, 1, DetectionMode::FirstReturn);
  CHECK(fdr.mean == doctest::Approx(x).epsilon(1e-15));
  CHECK(fdr.second_moment == doctest::Approx(x).epsilon(1e-15));
  CHECK(fdr.detection_probability == doctest::Approx(x).epsilon(1e-15));
  const DetectionMoments fdt = truncated_moments(c, 1, DetectionMode::FirstTransition);
  CHECK(fdt.mean == doctest::Approx(1.0 - x).epsilon(1e-15));
  CHECK(fdt.detection_probability == doctest::Approx(1.0 - x).epsilon(1e-15));
}

TEST_CASE("degenerate branch is exact") {
  for (double c : {1.0, -1.0}) {
    const DetectionMoments fdr = truncated_moments(c, 40, DetectionMode::FirstReturn);
    CHECK(fdr.mean == 1.0);
    CHECK(fdr.second_moment == 1.0);
    CHECK(fdr.detection_probability == 1.0);
    const DetectionMoments fdt = truncated_moments(c, 40, DetectionMode::FirstTransition);
    CHECK(fdt.mean == 0.0);
    CHECK(fdt.second_moment == 0.0);
    CHECK(fdt.detection_probability == 0.0);
  }
}

TEST_CASE("long truncations converge to the infinite-horizon values") {
  const double c = 0.5;
  const DetectionMoments fdr = truncated_moments(c, 100000, DetectionMode::FirstReturn);
  CHECK(fdr.mean == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fdr.detection_probability == doctest::Approx(1.0).epsilon(1e-12));
  const DetectionMoments fdt = truncated_moments(c, 100000, DetectionMode::FirstTransition);
  CHECK(fdt.mean == doctest::Approx(mean_fdt(c)).epsilon(1e-12));
}

TEST_CASE("first-return mean pins to 2 away from degeneracies") {
  // Quantized plateau: away from |c| = 1 the N = 1000 truncated mean deviates
  // from 2 by less than 1e-4; the deficit grows only near the degeneracy.
  for (double c2 = 0.0; c2 < 0.985; c2 += 0.0246) {
    const DetectionMoments m = truncated_moments(std::sqrt(c2), 1000, DetectionMode::FirstReturn);
    CHECK(std::abs(m.mean - 2.0) < 1e-4);
  }
}

TEST_CASE("degenerate potential ladder") {
  const DegeneracySet set = degenerate_potentials(-1.0, 3.0, 3);
  REQUIRE(set.potentials.size() == 3);
  CHECK(set.potentials[0] == doctest::Approx(0.31084193930702259).epsilon(1e-12));
  CHECK(set.potentials[1] == doctest::Approx(1.8402420615040302).epsilon(1e-12));
  CHECK(set.potentials[2] == doctest::Approx(2.9781881070693568).epsilon(1e-12));
  REQUIRE(set.gamma_degeneracies.size() == 3);
  CHECK(set.gamma_degeneracies[0] == doctest::Approx(1.0471975511965976).epsilon(1e-12));
  CHECK(set.gamma_degeneracies[2] == doctest::Approx(3.1415926535897931).epsilon(1e-12));

  // k = 1 branch is imaginary for |gamma| > pi/tau, so it is skipped.
  const DegeneracySet sparse = degenerate_potentials(2.0, 3.0, 3);
  REQUIRE(sparse.potentials.size() == 2);
  CHECK(sparse.gamma_degeneracies.size() == 3);
}
