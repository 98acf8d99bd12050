#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "advgame/frontier.hpp"

#include "json.hpp"

namespace advgame::game {

enum class UtilityForm { kLogLinear, kLinear, kRatio };

// Closed family of utility functions covering the supported scenarios:
//   log_linear: a*ln(MSE) + b*ln(PA)
//   linear:     a*MSE + b*PA
//   ratio:      PA / MSE^p
struct UtilitySpec {
  UtilityForm form = UtilityForm::kLogLinear;
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;

  static UtilitySpec log_linear(double a, double b) {
    return {UtilityForm::kLogLinear, a, b, 0.0};
  }
  static UtilitySpec linear(double a, double b) { return {UtilityForm::kLinear, a, b, 0.0}; }
  static UtilitySpec ratio(double p) { return {UtilityForm::kRatio, 0.0, 0.0, p}; }
};

// The adversary's utility must be strictly increasing in both MSE and PA.
void validate_adversary_utility(const UtilitySpec& spec);
// The DC's utility must be non-increasing in MSE and non-decreasing in PA.
void validate_dc_utility(const UtilitySpec& spec);

double evaluate_utility(const UtilitySpec& spec, double mse, double pa);

struct SingleShell {
  double z;
};

// Mixture of two shells, z1 < z2, beta1 + beta2 = 1,
// beta1*Phi(z1) + beta2*Phi(z2) = target alpha.
struct TwoShellMixture {
  double z1;
  double z2;
  double beta1;
  double beta2;
};

struct NoiseSpec {
  std::variant<SingleShell, TwoShellMixture> shape;

  bool is_single() const { return std::holds_alternative<SingleShell>(shape); }
  nlohmann::json to_json() const;
};

struct BestResponseOptions {
  int alpha_grid = 4001;     // dense scan of (alpha_min, 1]
  double value_tol = 1e-9;   // relative tie tolerance epsilon_U
  double alpha_tol = 1e-10;  // golden-section refinement width
};

// Alg. 1 Step 1: all alpha maximizing U_AD(c_eta(alpha), alpha) within
// the value tolerance, ascending.
std::vector<double> best_response(const frontier::CharacteristicCurve& curve,
                                  const UtilitySpec& adversary,
                                  const BestResponseOptions& opts = {});

// Alg. 1 Step 2 inner min: among tied best responses pick the one most
// detrimental to the DC; ties broken by smallest alpha.
std::pair<double, double> worst_case_dc_value(const frontier::CharacteristicCurve& curve,
                                              const std::vector<double>& responses,
                                              const UtilitySpec& dc);

// Alg. 2: single shell where the envelope touches the locus at alpha_star,
// otherwise the chord mixture between the bracketing contact vertices.
NoiseSpec build_noise(const frontier::CharacteristicCurve& curve, double alpha_star);

struct PerEtaRow {
  double eta;
  double alpha_star;
  double mse;
  double u_ad;
  double u_dc;
};

struct EquilibriumReport {
  double eta_star;
  double alpha_star;
  double mse_star;
  double u_ad;
  double u_dc;
  NoiseSpec noise;
  std::vector<PerEtaRow> per_eta_table;

  nlohmann::json to_json() const;
};

// Full leader optimization over the eta grid; ties go to the smallest eta.
EquilibriumReport optimal_eta(geometry::Dim n, double delta, const std::vector<double>& eta_grid,
                              const UtilitySpec& adversary, const UtilitySpec& dc,
                              const frontier::SweepOptions& sweep_opts = {},
                              const BestResponseOptions& br_opts = {});

// Round to 10 significant digits; applied to every number the report
// serializes so emitted files are stable.
double round_sig10(double x);

}  // namespace advgame::game
