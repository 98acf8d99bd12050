#pragma once

#include <functional>
#include <string>
#include <vector>

#include "advgame/frontier.hpp"
#include "advgame/simulate.hpp"

#include "json.hpp"

namespace advgame::verify {

// ---- Independent oracles ----------------------------------------------
// These reimplement the geometry/curve quantities through routes that
// share no code with the production path, so the two can cross-check.

// Adaptive Simpson on [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

// Cap fraction via direct quadrature of the normalized slice integral
// (abs tol 1e-13), the counterpart of the incomplete-beta production path.
double cap_fraction_quadrature(int n, double r, double c);

// Two-dimensional closed forms (disk caps):
double k2_closed(double r, double c);  // r^2 acos(c/r) - c sqrt(r^2 - c^2)
double q2_closed(double r, double c);  // (2/3) (r^2 - c^2)^(3/2)
double j2_closed(double r, double c);  // r^2/2 K2 + c/2 Q2
double phi2_closed(double delta, double eta, double z);
double psi2_closed(double delta, double eta, double z);

// Brute-force characteristic value: discretize z, maximize
// sum(psi_i f_i) s.t. sum(phi_i f_i) = alpha, sum f_i = 1, f >= 0 by
// enumerating all two-point supports (a 2-constraint LP needs at most 2).
// Returns the max objective, i.e. the discretized envelope value at alpha.
struct LpSolution {
  double value;
  double z1;
  double z2;
  double weight1;
};
LpSolution lp_two_point_max(const kernels::GameParams& params, int z_points, double alpha);

// ---- Check suites -------------------------------------------------------

struct Check {
  std::string name;
  double expected;
  double observed;
  double distance;  // sigmas for MC checks, relative error otherwise
  double bound;
  bool pass;
};

// Monte-Carlo kernel agreement at fixed magnitudes: empirical PA vs Phi
// and conditional MSE vs Psi/(4 Phi) within `sigmas` standard errors.
std::vector<Check> kernel_mc_suite(const std::vector<std::tuple<int, double, double>>& combos,
                                   double delta, std::uint64_t samples, std::uint64_t seed,
                                   double sigmas = 4.0, int threads = 0);

// General-N geometry vs the 2-D closed forms over an (r, c) grid, plus
// the n=1 cap volume identity.
std::vector<Check> closed_form_suite(int grid_points = 100);

// Production cap fraction vs the quadrature oracle.
std::vector<Check> quadrature_suite();

// Envelope vs the two-point LP enumeration.
std::vector<Check> lp_suite(int n, double delta, const std::vector<double>& etas,
                            const std::vector<double>& alphas, int z_points, double rel_bound,
                            const frontier::SweepOptions& sweep_opts = {});

nlohmann::json checks_to_json(const std::vector<Check>& checks);
bool all_pass(const std::vector<Check>& checks);

}  // namespace advgame::verify
