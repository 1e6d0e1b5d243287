#pragma once

#include <vector>

#include "mqw/detection.hpp"
#include "mqw/model.hpp"

namespace mqw {

// c = cos(sqrt(u^2 + gamma^2) * tau). |c| = 1 marks a degenerate point
// (quasi-energy collapse); between degeneracies the infinite-N first-return
// mean is pinned at 2.
double c_parameter(const ModelParams& params);

// Magnitude of the round-unitary return amplitude |<j|exp(-i H tau)|j>| =
// sqrt(cos^2(w tau) + (u/w)^2 sin^2(w tau)), w = sqrt(u^2 + gamma^2). Equals
// |c_parameter| iff u = 0 or sin(w tau) = 0; this is the value the two-site
// PMFs below take as `c` for u != 0, and either is 1 exactly when the other is.
double return_amplitude(const ModelParams& params);

// Two-site first-detection PMFs as functions of the return amplitude c
// (only c^2 enters). n >= 1.
//   first return:     p_1 = c^2,  p_n = (1-c^2)^2 c^(2(n-2)) for n >= 2
//   first transition: p_n = (1-c^2) c^(2(n-1))
double fdr_pmf(double c, int n);
double fdt_pmf(double c, int n);

// Infinite-N values. mean_fdr = 2 (1 at |c| = 1); mean_fdt = 1/(1-c^2)
// (0 at |c| = 1, where no transition ever happens); fdt_total = 1 (0 at
// |c| = 1). The |c^2 - 1| < kDegenerateTol branch is exact.
double mean_fdr(double c);
double mean_fdt(double c);
double fdt_total(double c);

// Truncated, unnormalized sums over n = 1..N in closed form (geometric-series
// differentiation), with a direct-summation guard near the degenerate point.
DetectionMoments truncated_moments(double c, int n_max, DetectionMode mode);

// Degenerate parameter locations for fixed tau: potentials
// u_k = sqrt((pi k / tau)^2 - gamma^2) for k = 1.. while real, and the u = 0
// hopping degeneracies gamma_k = pi k / tau.
struct DegeneracySet {
  double tau = 0.0;
  double gamma = 0.0;
  std::vector<double> potentials;           // ascending
  std::vector<double> gamma_degeneracies;   // ascending
};

DegeneracySet degenerate_potentials(double gamma, double tau, int k_max);

}  // namespace mqw
