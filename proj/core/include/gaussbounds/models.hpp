#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaussbounds/logderiv.hpp"

namespace gaussbounds {

using ParamMap = std::map<std::string, double>;

class ParametricModel {
 public:
  using StateFn = std::function<GaussianState(const Vec&)>;
  using JetFn = std::function<ModelJet(const Vec&)>;

  ParametricModel(std::string name, int modes, std::vector<std::string> params, StateFn state, JetFn jet = {});

  const std::string& name() const { return name_; }
  int modes() const { return modes_; }
  int params() const { return static_cast<int>(params_.size()); }
  const std::vector<std::string>& param_names() const { return params_; }

  GaussianState state(const Vec& theta) const;
  bool has_analytic_jet() const { return static_cast<bool>(jet_); }
  // Analytic jet if available, finite differences otherwise.
  ModelJet jet(const Vec& theta) const;

 private:
  void check(const Vec& theta) const;

  std::string name_;
  int modes_;
  std::vector<std::string> params_;
  StateFn state_;
  JetFn jet_;
};

// theta = (phi, eta). Input d = sqrt2 (Re a, Im a), sigma = diag(e^2r, e^-2r).
ParametricModel phase_loss_model(double alpha_re, double alpha_im, double r);
// theta = (Re a, Im a, r).
ParametricModel disp_squeeze_single_model(double n);
ParametricModel disp_squeeze_two_model(double n);

// Central differences, default step 1e-6 max(1, |theta_j|).
ModelJet finite_difference_jet(const ParametricModel& model, const Vec& theta, std::optional<double> h = std::nullopt);

struct BuiltinModel {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, double>> fixed;  // model constants with defaults
  std::vector<std::pair<std::string, double>> point;  // estimated parameters with defaults
  std::function<ParametricModel(const ParamMap&)> make;
};

const std::vector<BuiltinModel>& builtin_models();
const BuiltinModel& find_builtin(const std::string& name);

// Merges user values over the defaults; unknown names throw.
ParamMap resolve_params(const BuiltinModel& model, const ParamMap& fixed, const ParamMap& point);
Vec point_vector(const BuiltinModel& model, const ParamMap& all);

enum class BoundKind { CS, CR, CHbar, CH };
const char* to_string(BoundKind k);

// Closed-form bounds for W = I. Throws std::domain_error outside the
// parameter ranges where a closed form is known.
double closed_form_bounds(const std::string& model, const ParamMap& params, BoundKind which);

// Off-diagonal (0,1) element and full matrix of the reference Uhlmann curvature.
Mat uhlmann_reference(const std::string& model, const ParamMap& params);

// Hermitian content H of [L_j, L_k] = i H in the standard basis.
struct CommutatorReference {
  double h0 = 0.0;
  Vec h1;
  Mat h2;
};
CommutatorReference commutator_reference(const std::string& model, const ParamMap& params, int j, int k);

// Polynomial extrapolation to x = 0 through (x_i, y_i).
template <typename T>
T neville_zero(const std::vector<T>& x, std::vector<T> y) {
  const std::size_t n = x.size();
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = n - 1; i >= k; --i) {
      y[i] = (x[i - k] * y[i] - x[i] * y[i - 1]) / (x[i - k] - x[i]);
    }
  }
  return y[n - 1];
}

// SLD commutator of the phase/loss model for a coherent input, as the
// r -> 0 limit of the squeezed-coherent model, evaluated in long double and
// extrapolated from r = h0, h0/q, ...
CommutatorReference coherent_limit_commutator(double alpha_re, double alpha_im, double phi, double eta,
                                              double h0 = 0.1, int levels = 8, double q = 1.5);

}  // namespace gaussbounds
