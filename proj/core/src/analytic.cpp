#include "mqw/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace mqw {

namespace {

// When N (1 - c^2) is this small the geometric closed forms subtract nearly
// equal ~O(1) terms and lose most of their precision; fall back to direct
// summation (still above kDegenerateTol = exact branch).
constexpr double kSummationGuard = 0.5;

bool degenerate(double x) { return std::abs(x - 1.0) < kDegenerateTol; }

void check_c(double c) {
  if (!(std::isfinite(c)) || std::abs(c) > 1.0 + kConstructionTol)
    throw std::invalid_argument("return amplitude c must lie in [-1, 1]");
}

void check_n(int n) {
  if (n < 1) throw std::invalid_argument("detection round n must be >= 1");
}

DetectionMoments from_sums(double s0, double s1, double s2) {
  DetectionMoments m;
  m.detection_probability = s0;
  m.mean = s1;
  m.second_moment = s2;
  m.variance = s2 - s1 * s1;
  return m;
}

DetectionMoments summed_moments(double x, int n_max, DetectionMode mode) {
  // Kahan-compensated direct sums; p_n evaluated by recurrence in x.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  auto add = [](double& sum, double& comp, double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  double p = (mode == DetectionMode::FirstReturn) ? x : (1.0 - x);
  for (int n = 1; n <= n_max; ++n) {
    if (mode == DetectionMode::FirstReturn && n == 2) p = (1.0 - x) * (1.0 - x);
    add(s0, c0, p);
    add(s1, c1, static_cast<double>(n) * p);
    add(s2, c2, static_cast<double>(n) * static_cast<double>(n) * p);
    if (!(mode == DetectionMode::FirstReturn && n == 1)) p *= x;
  }
  return from_sums(s0, s1, s2);
}

}  // namespace

double c_parameter(const ModelParams& params) {
  params.validate();
  return std::cos(std::hypot(params.u, params.gamma) * params.tau);
}

double return_amplitude(const ModelParams& params) {
  params.validate();
  const double w = std::hypot(params.u, params.gamma);
  if (w == 0.0) return 1.0;
  const double c = std::cos(w * params.tau);
  const double s = std::sin(w * params.tau) * (params.u / w);
  return std::sqrt(c * c + s * s);
}

double fdr_pmf(double c, int n) {
  check_c(c);
  check_n(n);
  const double x = c * c;
  if (n == 1) return x;
  return (1.0 - x) * (1.0 - x) * std::pow(x, n - 2);
}

double fdt_pmf(double c, int n) {
  check_c(c);
  check_n(n);
  const double x = c * c;
  return (1.0 - x) * std::pow(x, n - 1);
}

double mean_fdr(double c) {
  check_c(c);
  return degenerate(c * c) ? 1.0 : 2.0;
}

double mean_fdt(double c) {
  check_c(c);
  const double x = c * c;
  return degenerate(x) ? 0.0 : 1.0 / (1.0 - x);
}

double fdt_total(double c) {
  check_c(c);
  return degenerate(c * c) ? 0.0 : 1.0;
}

DetectionMoments truncated_moments(double c, int n_max, DetectionMode mode) {
  check_c(c);
  check_n(n_max);
  const double x = c * c;
  const double N = n_max;

  if (degenerate(x)) {
    // First return detects at n = 1 with certainty; a transition never occurs.
    if (mode == DetectionMode::FirstReturn) return from_sums(1.0, 1.0, 1.0);
    return from_sums(0.0, 0.0, 0.0);
  }
  if (N * (1.0 - x) < kSummationGuard) return summed_moments(x, n_max, mode);

  const double one_minus = 1.0 - x;
  const double b = N * N * one_minus * one_minus + 2.0 * N * one_minus + 1.0 + x;
  if (mode == DetectionMode::FirstReturn) {
    const double xp = std::pow(x, n_max - 1);  // x^(N-1)
    const double s0 = 1.0 - one_minus * xp;
    const double s1 = 2.0 - xp * (1.0 + N * one_minus);
    const double s2 = (2.0 * (2.0 - x) - xp * b) / one_minus;
    return from_sums(s0, s1, s2);
  }
  const double xp = std::pow(x, n_max);  // x^N
  const double s0 = 1.0 - xp;
  const double s1 = (1.0 - xp * (1.0 + N * one_minus)) / one_minus;
  const double s2 = (1.0 + x - xp * b) / (one_minus * one_minus);
  return from_sums(s0, s1, s2);
}

DegeneracySet degenerate_potentials(double gamma, double tau, int k_max) {
  if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
  if (!(std::isfinite(tau) && tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  DegeneracySet set;
  set.tau = tau;
  set.gamma = gamma;
  for (int k = 1; k <= k_max; ++k) {
    const double wk = M_PI * k / tau;
    set.gamma_degeneracies.push_back(wk);
    const double radicand = wk * wk - gamma * gamma;
    if (radicand >= 0.0) set.potentials.push_back(std::sqrt(radicand));
  }
  return set;
}

}  // namespace mqw
