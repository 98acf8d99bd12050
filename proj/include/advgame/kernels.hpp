#pragma once

#include "advgame/geometry.hpp"

namespace advgame::kernels {

// One game instance: dimension N, honest-noise radius Delta, acceptance
// threshold eta. The threshold floor eta >= 2 guarantees two honest
// reports are never rejected.
struct GameParams {
  GameParams(geometry::Dim n_, double delta_, double eta_);

  geometry::Dim n;
  double delta;
  double eta;

  double support_lo() const { return (eta - 1.0) * delta; }
  double support_hi() const { return (eta + 1.0) * delta; }
};

// One point of the parametric locus: magnitude z, acceptance kernel
// q = Phi_N(z), error kernel psi = Psi_N(z).
struct KernelSample {
  double z;
  double q;
  double psi;
};

// Radical-hyperplane cut of the lens at noise magnitude z:
// u_c = (z^2 + Delta^2 (1 - eta^2)) / (2z).
double cut_point(const GameParams& params, double z);

// Acceptance kernel Phi_N(z): probability the honest report lands inside
// the acceptance ball centered at adversarial noise of magnitude z.
// 1 below (eta-1)Delta, lens fraction inside the window, 0 above
// (eta+1)Delta.
double phi(const GameParams& params, double z);

// Error kernel Psi_N(z): 4 * E[||(N_h + n_a)/2||^2 ; accept] conditional
// weight at magnitude z. Closed form below the window, log-space lens
// moments inside, 0 above.
double psi(const GameParams& params, double z);

}  // namespace advgame::kernels
