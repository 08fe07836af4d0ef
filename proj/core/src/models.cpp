#include "gaussbounds/models.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace gaussbounds {

ParametricModel::ParametricModel(std::string name, int modes, std::vector<std::string> params, StateFn state, JetFn jet)
    : name_(std::move(name)), modes_(modes), params_(std::move(params)), state_(std::move(state)), jet_(std::move(jet)) {
  if (modes_ < 1) throw std::invalid_argument(fmt::format("ParametricModel '{}': invalid mode count", name_));
  if (params_.empty()) throw std::invalid_argument(fmt::format("ParametricModel '{}': no parameters", name_));
  if (!state_) throw std::invalid_argument(fmt::format("ParametricModel '{}': missing state evaluator", name_));
}

void ParametricModel::check(const Vec& theta) const {
  if (theta.size() != params()) {
    throw std::invalid_argument(
        fmt::format("model '{}' takes {} parameters, got {}", name_, params(), theta.size()));
  }
  if (!theta.allFinite()) throw std::invalid_argument(fmt::format("model '{}': non-finite parameter", name_));
}

GaussianState ParametricModel::state(const Vec& theta) const {
  check(theta);
  return state_(theta);
}

ModelJet ParametricModel::jet(const Vec& theta) const {
  check(theta);
  return jet_ ? jet_(theta) : finite_difference_jet(*this, theta);
}

ModelJet finite_difference_jet(const ParametricModel& model, const Vec& theta, std::optional<double> h) {
  if (h && !(*h > 0.0)) throw std::invalid_argument(fmt::format("finite_difference_jet: step {} must be positive", *h));
  const GaussianState centre = model.state(theta);
  std::vector<Vec> dd;
  std::vector<Mat> ds;
  for (int j = 0; j < model.params(); ++j) {
    const double step = h ? *h : 1e-6 * std::max(1.0, std::abs(theta[j]));
    Vec tp = theta, tm = theta;
    tp[j] += step;
    tm[j] -= step;
    GaussianState sp = centre, sm = centre;
    try {
      sp = model.state(tp);
      sm = model.state(tm);
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("finite_difference_jet: evaluation of '{}' failed at the stencil for {}: {}",
                                           model.name(), model.param_names()[j], e.what()));
    }
    dd.push_back((sp.d() - sm.d()) / (2.0 * step));
    Mat g = (sp.sigma() - sm.sigma()) / (2.0 * step);
    ds.push_back(0.5 * (g + g.transpose()));
  }
  return ModelJet(centre, std::move(dd), std::move(ds), model.param_names());
}

namespace {

template <typename T>
using VecT = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using MatT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
struct RawJet {
  VecT<T> d;
  MatT<T> sigma;
  std::vector<VecT<T>> dd;
  std::vector<MatT<T>> ds;
};

template <typename T>
RawJet<T> phase_loss_raw(T are, T aim, T r, T phi, T eta) {
  using std::cos, std::exp, std::sin, std::sqrt;
  VecT<T> din(2);
  din << sqrt(T(2)) * are, sqrt(T(2)) * aim;
  MatT<T> sin_ = MatT<T>::Zero(2, 2);
  sin_(0, 0) = exp(T(2) * r);
  sin_(1, 1) = exp(T(-2) * r);
  MatT<T> R(2, 2), dR(2, 2);
  R << cos(phi), sin(phi), -sin(phi), cos(phi);
  dR << -sin(phi), cos(phi), -cos(phi), -sin(phi);
  const MatT<T> I = MatT<T>::Identity(2, 2);
  RawJet<T> j;
  j.d = sqrt(eta) * (R * din);
  j.sigma = eta * (R * sin_ * R.transpose()) + (T(1) - eta) * I;
  j.dd = {sqrt(eta) * (dR * din), (R * din) / (T(2) * sqrt(eta))};
  j.ds = {eta * (dR * sin_ * R.transpose() + R * sin_ * dR.transpose()), R * sin_ * R.transpose() - I};
  return j;
}

ModelJet to_jet(const RawJet<double>& j, std::vector<std::string> names) {
  return ModelJet(GaussianState(j.d, j.sigma), j.dd, j.ds, std::move(names));
}

void require_open_unit(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::invalid_argument(fmt::format("phase-loss: eta = {} must lie in (0, 1) for a jet", eta));
  }
}

void require_nonnegative(double n, const char* who) {
  if (!(n >= 0.0)) throw std::invalid_argument(fmt::format("{}: thermal occupation n = {} must be >= 0", who, n));
}

double get(const ParamMap& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end()) throw std::invalid_argument(fmt::format("missing parameter '{}'", key));
  return it->second;
}

Mat diag(std::initializer_list<double> v) {
  Vec d(v.size());
  int i = 0;
  for (double x : v) d[i++] = x;
  return d.asDiagonal();
}

}  // namespace

ParametricModel phase_loss_model(double alpha_re, double alpha_im, double r) {
  auto state = [=](const Vec& t) {
    const auto j = phase_loss_raw<double>(alpha_re, alpha_im, r, t[0], t[1]);
    return GaussianState(j.d, j.sigma);
  };
  auto jet = [=](const Vec& t) {
    require_open_unit(t[1]);
    return to_jet(phase_loss_raw<double>(alpha_re, alpha_im, r, t[0], t[1]), {"phi", "eta"});
  };
  return ParametricModel("phase-loss", 1, {"phi", "eta"}, state, jet);
}

ParametricModel disp_squeeze_single_model(double n) {
  require_nonnegative(n, "disp-squeeze-1");
  const double k = 2 * n + 1;
  auto state = [=](const Vec& t) {
    Vec d(2);
    d << std::sqrt(2.0) * t[0], std::sqrt(2.0) * t[1];
    return GaussianState(d, k * diag({std::exp(2 * t[2]), std::exp(-2 * t[2])}));
  };
  auto jet = [=](const Vec& t) {
    const double s = std::sqrt(2.0);
    std::vector<Vec> dd{Vec::Unit(2, 0) * s, Vec::Unit(2, 1) * s, Vec::Zero(2)};
    std::vector<Mat> ds{Mat::Zero(2, 2), Mat::Zero(2, 2), k * diag({2 * std::exp(2 * t[2]), -2 * std::exp(-2 * t[2])})};
    return ModelJet(state(t), dd, ds, {"alpha_re", "alpha_im", "r"});
  };
  return ParametricModel("disp-squeeze-1", 1, {"alpha_re", "alpha_im", "r"}, state, jet);
}

ParametricModel disp_squeeze_two_model(double n) {
  require_nonnegative(n, "disp-squeeze-2");
  const double k = 2 * n + 1;
  auto state = [=](const Vec& t) {
    Vec d(4);
    d << t[0], t[1], -t[0], -t[1];
    const double a = std::exp(2 * t[2]), b = std::exp(-2 * t[2]);
    return GaussianState(d, k * diag({a, b, b, a}));
  };
  auto jet = [=](const Vec& t) {
    Vec e1(4), e2(4);
    e1 << 1, 0, -1, 0;
    e2 << 0, 1, 0, -1;
    const double a = 2 * std::exp(2 * t[2]), b = -2 * std::exp(-2 * t[2]);
    std::vector<Vec> dd{e1, e2, Vec::Zero(4)};
    std::vector<Mat> ds{Mat::Zero(4, 4), Mat::Zero(4, 4), k * diag({a, b, b, a})};
    return ModelJet(state(t), dd, ds, {"alpha_re", "alpha_im", "r"});
  };
  return ParametricModel("disp-squeeze-2", 2, {"alpha_re", "alpha_im", "r"}, state, jet);
}

const std::vector<BuiltinModel>& builtin_models() {
  static const std::vector<BuiltinModel> models = {
      {"phase-loss", "phase shift followed by pure loss on a displaced squeezed vacuum; theta = (phi, eta)",
       {{"alpha_re", 0.3}, {"alpha_im", 0.0}, {"r", 0.0}},
       {{"phi", 0.0}, {"eta", 0.5}},
       [](const ParamMap& p) { return phase_loss_model(get(p, "alpha_re"), get(p, "alpha_im"), get(p, "r")); }},
      {"disp-squeeze-1", "single-mode displaced squeezed thermal state; theta = (alpha_re, alpha_im, r)",
       {{"n", 0.5}},
       {{"alpha_re", 0.0}, {"alpha_im", 0.0}, {"r", 0.0}},
       [](const ParamMap& p) { return disp_squeeze_single_model(get(p, "n")); }},
      {"disp-squeeze-2", "two-mode displaced squeezed thermal state after a balanced beam splitter",
       {{"n", 0.5}},
       {{"alpha_re", 0.0}, {"alpha_im", 0.0}, {"r", 0.0}},
       [](const ParamMap& p) { return disp_squeeze_two_model(get(p, "n")); }},
  };
  return models;
}

const BuiltinModel& find_builtin(const std::string& name) {
  for (const auto& m : builtin_models()) {
    if (m.name == name) return m;
  }
  std::string known;
  for (const auto& m : builtin_models()) known += (known.empty() ? "" : ", ") + m.name;
  throw std::invalid_argument(fmt::format("unknown model '{}' (known: {})", name, known));
}

ParamMap resolve_params(const BuiltinModel& model, const ParamMap& fixed, const ParamMap& point) {
  ParamMap out;
  for (const auto& [k, v] : model.fixed) out[k] = v;
  for (const auto& [k, v] : model.point) out[k] = v;
  auto apply = [&](const ParamMap& src, const std::vector<std::pair<std::string, double>>& allowed, const char* what) {
    for (const auto& [k, v] : src) {
      bool ok = false;
      for (const auto& a : allowed) ok = ok || a.first == k;
      if (!ok) {
        std::string names;
        for (const auto& a : allowed) names += (names.empty() ? "" : ", ") + a.first;
        throw std::invalid_argument(
            fmt::format("model '{}' has no {} parameter '{}' (expected one of: {})", model.name, what, k, names));
      }
      out[k] = v;
    }
  };
  apply(fixed, model.fixed, "fixed");
  apply(point, model.point, "estimated");
  return out;
}

Vec point_vector(const BuiltinModel& model, const ParamMap& all) {
  Vec t(model.point.size());
  for (std::size_t i = 0; i < model.point.size(); ++i) t[i] = get(all, model.point[i].first);
  return t;
}

const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::CS:
      return "CS";
    case BoundKind::CR:
      return "CR";
    case BoundKind::CHbar:
      return "CHbar";
    case BoundKind::CH:
      return "CH";
  }
  return "?";
}

namespace {

double csch2(double x) { return 1.0 / (std::sinh(x) * std::sinh(x)); }
double sech2(double x) { return 1.0 / (std::cosh(x) * std::cosh(x)); }

[[noreturn]] void out_of_domain(const std::string& model, BoundKind k, const std::string& why) {
  throw std::domain_error(fmt::format("no closed form for {} of '{}': {}", to_string(k), model, why));
}

double phase_loss_closed(const ParamMap& p, BoundKind which) {
  const double are = get(p, "alpha_re"), aim = get(p, "alpha_im"), r = get(p, "r"), eta = get(p, "eta");
  const double A = are * are + aim * aim;
  if (!(eta > 0.0 && eta < 1.0)) out_of_domain("phase-loss", which, "eta must lie in (0, 1)");
  if (r == 0.0 && A > 0.0) {
    const double cs = (1 + 4 * eta * eta) / (4 * eta * A);
    return which == BoundKind::CS ? cs : cs + 1.0 / A;
  }
  if (A == 0.0 && r != 0.0) {
    const double q = 1 - 2 * eta * (1 - eta);
    const double e2 = eta * eta;
    const double cs = (16 * e2 * e2 * (1 - eta) * (1 - eta) + (1 + 2 * eta * (eta + 4 * e2 - 4 * e2 * eta - 1)) * csch2(r) -
                       q * q * sech2(r)) /
                      (8 * e2 * q);
    switch (which) {
      case BoundKind::CS:
        return cs;
      case BoundKind::CR:
        return cs + ((4 * eta * (1 + eta - 2 * e2) - 1) * csch2(r) + (1 - 2 * eta) * (1 - 2 * eta) * sech2(r)) / (8 * e2 * q);
      case BoundKind::CHbar:
        return cs + (1 - eta) * csch2(r) / q;
      case BoundKind::CH:
        if (eta != 0.5) out_of_domain("phase-loss", which, "for squeezed input the Holevo bound is known only at eta = 1/2");
        return 2 * csch2(r) + std::tanh(r) * std::tanh(r) / 4;
    }
  }
  out_of_domain("phase-loss", which, "closed forms exist for coherent (r = 0) or squeezed-vacuum (alpha = 0) input only");
}

double disp_squeeze_closed(int modes, const ParamMap& p, BoundKind which) {
  const double n = get(p, "n"), r = get(p, "r");
  if (!(n >= 0.0)) out_of_domain(modes == 1 ? "disp-squeeze-1" : "disp-squeeze-2", which, "n must be >= 0");
  const double k = 2 * n + 1;
  const double q = 2 * n * (n + 1) + 1;
  if (modes == 1) {
    const double cs = (k * k * k * std::cosh(2 * r) + q) / (2 * k * k);
    switch (which) {
      case BoundKind::CS:
        return cs;
      case BoundKind::CR:
        return cs + n * (n + 1) / q;
      case BoundKind::CHbar:
      case BoundKind::CH:
        return cs + 0.5;
    }
  }
  const double cs = (2 * k * k * k / std::cosh(2 * r) + q) / (4 * k * k);
  switch (which) {
    case BoundKind::CS:
      return cs;
    case BoundKind::CR:
      // 0/0 at n = r = 0: the limits n -> 0 and r -> 0 disagree
      if (n == 0.0 && r == 0.0) out_of_domain("disp-squeeze-2", which, "undefined at n = 0, r = 0");
      return n * n * (n + 1) * (n + 1) / (k * k * q) + 2 * n * (n + 1) / (k * std::cosh(2 * r) - 1);
    case BoundKind::CHbar:
      return cs + 1.0 / (std::cosh(4 * r) + 1);
    case BoundKind::CH:
      break;
  }
  out_of_domain("disp-squeeze-2", which, "the Holevo bound has no closed form for this model");
}

}  // namespace

double closed_form_bounds(const std::string& model, const ParamMap& params, BoundKind which) {
  if (model == "phase-loss") return phase_loss_closed(params, which);
  if (model == "disp-squeeze-1") return disp_squeeze_closed(1, params, which);
  if (model == "disp-squeeze-2") return disp_squeeze_closed(2, params, which);
  throw std::invalid_argument(fmt::format("closed_form_bounds: unknown model '{}'", model));
}

Mat uhlmann_reference(const std::string& model, const ParamMap& p) {
  if (model == "phase-loss") {
    const double are = get(p, "alpha_re"), aim = get(p, "alpha_im"), r = get(p, "r"), eta = get(p, "eta");
    const double A = are * are + aim * aim;
    double u;
    if (r == 0.0 && A > 0.0) {
      u = 2 * A;
    } else if (A == 0.0 && r != 0.0) {
      const double den = 1 - eta * (1 - eta) + eta * (1 - eta) * std::cosh(2 * r);
      u = eta * std::sinh(2 * r) * std::sinh(2 * r) / (den * den);
    } else {
      throw std::domain_error("uhlmann_reference: phase-loss reference needs r = 0 or alpha = 0");
    }
    Mat U(2, 2);
    U << 0, u, -u, 0;
    return U;
  }
  if (model == "disp-squeeze-1" || model == "disp-squeeze-2") {
    const double n = get(p, "n");
    const double u = 4 / ((2 * n + 1) * (2 * n + 1));
    Mat U = Mat::Zero(3, 3);
    U(0, 1) = u;
    U(1, 0) = -u;
    return U;
  }
  throw std::invalid_argument(fmt::format("uhlmann_reference: unknown model '{}'", model));
}

CommutatorReference commutator_reference(const std::string& model, const ParamMap& p, int j, int k) {
  double sign = 1.0;
  if (j > k) {
    std::swap(j, k);
    sign = -1.0;
  }
  CommutatorReference c;
  auto finish = [&]() {
    c.h0 *= sign;
    c.h1 *= sign;
    c.h2 *= sign;
    return c;
  };
  if (model == "phase-loss") {
    if (j != 0 || k != 1) throw std::invalid_argument("commutator_reference: phase-loss has parameters 0 and 1");
    const double are = get(p, "alpha_re"), aim = get(p, "alpha_im"), r = get(p, "r"), eta = get(p, "eta"),
                 phi = get(p, "phi");
    const double A = are * are + aim * aim;
    c.h1 = Vec::Zero(2);
    c.h2 = Mat::Zero(2, 2);
    if (r == 0.0 && A > 0.0) {
      const double pre = std::sqrt(2.0) * (1 - 2 * eta) / (std::sqrt(eta) * (1 - eta));
      c.h0 = 4 * eta * A / (1 - eta);
      c.h1 << 2 * pre * (are * std::cos(phi) + aim * std::sin(phi)), 2 * pre * (aim * std::cos(phi) - are * std::sin(phi));
      return finish();
    }
    if (A == 0.0 && r != 0.0) {
      const double den = 1 - eta * (1 - eta) + eta * (1 - eta) * std::cosh(2 * r);
      const double den2 = den * den;
      const double c2 = std::cos(phi) * std::cos(phi), s2 = std::sin(phi) * std::sin(phi);
      const double e2 = eta * eta, m2 = (1 - eta) * (1 - eta);
      const double pre = (1 - std::exp(-4 * r)) / (4 * (1 - eta) * den2);
      const double u1 = pre * (-e2 * c2 + m2 * std::exp(2 * r) * std::cos(2 * phi) + e2 * std::exp(4 * r) * s2);
      const double u2 = pre * (e2 * std::exp(4 * r) * c2 - m2 * std::exp(2 * r) * std::cos(2 * phi) - e2 * s2);
      const double u3 =
          (e2 * std::cosh(2 * r) - m2) * std::sin(2 * phi) * std::sinh(2 * r) / (2 * (1 - eta) * den2);
      c.h0 = 0.0;
      c.h2 << 4 * u1, 4 * u3, 4 * u3, 4 * u2;
      return finish();
    }
    throw std::domain_error("commutator_reference: phase-loss reference needs r = 0 or alpha = 0");
  }
  if (model == "disp-squeeze-1" || model == "disp-squeeze-2") {
    const bool two = model == "disp-squeeze-2";
    const int n2 = two ? 4 : 2;
    const double n = get(p, "n"), are = get(p, "alpha_re"), aim = get(p, "alpha_im");
    const double q = 2 * n * (n + 1) + 1;
    c.h1 = Vec::Zero(n2);
    c.h2 = Mat::Zero(n2, n2);
    c.h0 = 0.0;
    if (j == 0 && k == 1) {
      c.h0 = 8 / ((2 * n + 1) * (2 * n + 1));
    } else if (j == 0 && k == 2) {
      if (two) {
        c.h1 << 0, -4 / q, 0, -4 / q;
      } else {
        c.h0 = 8 * aim / q;
        c.h1 << 0, -4 * std::sqrt(2.0) / q;
      }
    } else if (j == 1 && k == 2) {
      if (two) {
        c.h1 << -4 / q, 0, -4 / q, 0;
      } else {
        c.h0 = 8 * are / q;
        c.h1 << -4 * std::sqrt(2.0) / q, 0;
      }
    } else if (j != k) {
      throw std::invalid_argument(fmt::format("commutator_reference: invalid parameter pair ({}, {})", j, k));
    }
    return finish();
  }
  throw std::invalid_argument(fmt::format("commutator_reference: unknown model '{}'", model));
}

CommutatorReference coherent_limit_commutator(double alpha_re, double alpha_im, double phi, double eta, double h0,
                                              int levels, double q) {
  require_open_unit(eta);
  if (!(h0 > 0.0) || levels < 2 || !(q > 1.0)) {
    throw std::invalid_argument("coherent_limit_commutator: need h0 > 0, levels >= 2, q > 1");
  }
  using LD = long double;
  std::vector<LD> xs;
  std::vector<std::vector<LD>> ys(6);  // h0, h1 (2), upper triangle of h2 (3)
  for (int i = 0; i < levels; ++i) {
    const LD r = static_cast<LD>(h0) / std::pow(static_cast<LD>(q), i);
    const auto j = phase_loss_raw<LD>(alpha_re, alpha_im, r, phi, eta);
    const auto t = sld_commutator_terms<LD>(j.d, j.sigma, j.dd[0], j.ds[0], j.dd[1], j.ds[1]);
    xs.push_back(r);
    ys[0].push_back(t.h0);
    ys[1].push_back(t.h1[0]);
    ys[2].push_back(t.h1[1]);
    ys[3].push_back(t.h2(0, 0));
    ys[4].push_back(t.h2(0, 1));
    ys[5].push_back(t.h2(1, 1));
  }
  CommutatorReference c;
  c.h0 = static_cast<double>(neville_zero<LD>(xs, ys[0]));
  c.h1 = Vec(2);
  c.h1 << static_cast<double>(neville_zero<LD>(xs, ys[1])), static_cast<double>(neville_zero<LD>(xs, ys[2]));
  c.h2 = Mat(2, 2);
  const double a = static_cast<double>(neville_zero<LD>(xs, ys[3]));
  const double b = static_cast<double>(neville_zero<LD>(xs, ys[4]));
  const double d = static_cast<double>(neville_zero<LD>(xs, ys[5]));
  c.h2 << a, b, b, d;
  return c;
}

}  // namespace gaussbounds
