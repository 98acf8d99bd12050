#pragma once

#include <iosfwd>
#include <vector>

#include "advgame/kernels.hpp"

namespace advgame::frontier {

// Sweep / curve knobs. Defaults match the shipped example manifests.
struct SweepOptions {
  int grid_size = 4001;          // uniform z points across the support window
  int endpoint_refinement = 32;  // extra geometric points near each endpoint
  double endpoint_window = 1e-6; // refinement window, relative to delta
  double alpha_min = 1e-6;       // c_eta(alpha) floor; the curve diverges at 0
};

// Parametric locus (z, Phi(z), Psi(z)) over the support window, z
// ascending and q strictly decreasing from 1 to 0.
struct Locus {
  kernels::GameParams params;
  std::vector<kernels::KernelSample> samples;
  int grid_size = 0;
};

struct HullVertex {
  double q;
  double psi;
  bool contact;  // vertex coincides with a raw locus sample
};

// Piecewise-linear upper concave envelope of the locus in the (q, psi)
// plane; c_eta(alpha) = envelope(alpha) / (4 alpha).
struct CharacteristicCurve {
  kernels::GameParams params;
  std::vector<HullVertex> vertices;  // q strictly increasing
  double alpha_min = 1e-6;

  // Envelope value at q (linear interpolation between vertices).
  double envelope(double q) const;
};

Locus sweep(const kernels::GameParams& params, const SweepOptions& opts = {});

// Unique z in the support window with phi(z) = q, by bisection to
// |dz| <= 1e-12 * delta.
double phi_inverse(const kernels::GameParams& params, double q);

CharacteristicCurve upper_concave_envelope(const Locus& locus, double alpha_min = 1e-6);

// Max MSE the adversary can enforce at acceptance level alpha.
double c_eta(const CharacteristicCurve& curve, double alpha);

// CSV rows "alpha,c_eta,eta,n,delta", alpha ascending, full round-trip
// double formatting.
void write_curve_csv(std::ostream& out, const CharacteristicCurve& curve,
                     const std::vector<double>& alphas);

}  // namespace advgame::frontier
