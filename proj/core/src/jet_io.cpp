#include "gaussbounds/jet_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"

namespace gaussbounds {
namespace {

using nlohmann::json;

constexpr double kDsigmaSymTol = 1e-10;

// A field path such as dsigma[1][0][2], kept alongside its JSON pointer.
struct Path {
  std::string display;
  std::string pointer;

  Path key(const std::string& k) const {
    std::string esc;
    for (char c : k) {
      if (c == '~') esc += "~0";
      else if (c == '/') esc += "~1";
      else esc += c;
    }
    return {display.empty() ? k : display + "." + k, pointer + "/" + esc};
  }
  Path index(std::size_t i) const { return {fmt::format("{}[{}]", display, i), fmt::format("{}/{}", pointer, i)}; }
};

// Walks syntactically valid JSON text and returns the line on which the
// value addressed by `pointer` starts.
class LineLocator {
 public:
  LineLocator(const std::string& text, std::string pointer) : s_(text), target_(std::move(pointer)) {}

  int find() {
    value("");
    return found_ > 0 ? found_ : 1;
  }

 private:
  void ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
      if (s_[i_] == '\n') ++line_;
      ++i_;
    }
  }

  std::string string_token() {
    std::string out;
    ++i_;
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\') ++i_;
      if (i_ < s_.size()) out += s_[i_++];
    }
    ++i_;
    return out;
  }

  void value(const std::string& ptr) {
    ws();
    if (found_ > 0 || i_ >= s_.size()) return;
    if (ptr == target_) {
      found_ = line_;
      return;
    }
    const char c = s_[i_];
    if (c == '{') {
      ++i_;
      ws();
      if (s_[i_] == '}') {
        ++i_;
        return;
      }
      while (found_ < 0 && i_ < s_.size()) {
        ws();
        const std::string k = string_token();
        ws();
        ++i_;  // ':'
        value(Path{"", ptr}.key(k).pointer);
        ws();
        if (i_ < s_.size() && s_[i_++] != ',') return;
      }
    } else if (c == '[') {
      ++i_;
      ws();
      if (s_[i_] == ']') {
        ++i_;
        return;
      }
      for (std::size_t idx = 0; found_ < 0 && i_ < s_.size(); ++idx) {
        value(fmt::format("{}/{}", ptr, idx));
        ws();
        if (i_ < s_.size() && s_[i_++] != ',') return;
      }
    } else if (c == '"') {
      string_token();
    } else {
      while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != ']' && s_[i_] != '}' &&
             !std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      }
    }
  }

  const std::string& s_;
  std::string target_;
  std::size_t i_ = 0;
  int line_ = 1;
  int found_ = -1;
};

class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const Path& at, const std::string& msg) const {
    const int line = LineLocator(text_, at.pointer).find();
    throw std::invalid_argument(
        fmt::format("{}:{}: {}: {}", source_, line, at.display.empty() ? "<root>" : at.display, msg));
  }

  const json& field(const json& obj, const Path& at, const std::string& name) const {
    auto it = obj.find(name);
    if (it == obj.end()) fail(at, fmt::format("missing required field \"{}\"", name));
    return *it;
  }

  double number(const json& v, const Path& at) const {
    if (!v.is_number()) fail(at, fmt::format("expected a number, got {}", v.type_name()));
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at, "value is not finite");
    return x;
  }

  const json& array(const json& v, const Path& at, std::size_t n) const {
    if (!v.is_array()) fail(at, fmt::format("expected an array of length {}, got {}", n, v.type_name()));
    if (v.size() != n) fail(at, fmt::format("expected length {}, got {}", n, v.size()));
    return v;
  }

  Vec vector(const json& v, const Path& at, int n) const {
    array(v, at, static_cast<std::size_t>(n));
    Vec out(n);
    for (int i = 0; i < n; ++i) out(i) = number(v[i], at.index(i));
    return out;
  }

  Mat matrix(const json& v, const Path& at, int n) const {
    array(v, at, static_cast<std::size_t>(n));
    Mat out(n, n);
    for (int i = 0; i < n; ++i) out.row(i) = vector(v[i], at.index(i), n).transpose();
    return out;
  }

  void require_symmetric(const Mat& M, const Path& at, double tol) const {
    for (Eigen::Index a = 0; a < M.rows(); ++a) {
      for (Eigen::Index b = a + 1; b < M.cols(); ++b) {
        if (std::abs(M(a, b) - M(b, a)) > tol) {
          fail(at.index(a).index(b),
               fmt::format("matrix is not symmetric: [{}][{}] = {} but [{}][{}] = {}", a, b, M(a, b), b, a, M(b, a)));
        }
      }
    }
  }

 private:
  const std::string& text_;
  std::string source_;
};

json matrix_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vec& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

}  // namespace

ModelJet parse_jet_json(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offsets are 1-based and point just past the offending character.
    const std::size_t pos = e.byte > 0 ? std::min<std::size_t>(e.byte - 1, text.size()) : 0;
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
    throw std::invalid_argument(fmt::format("{}:{}: syntax error: {}", source, line, e.what()));
  }

  const Reader rd(text, source);
  const Path root_path;
  if (!root.is_object()) rd.fail(root_path, "expected a JSON object");

  static const std::set<std::string> known = {"modes", "params", "d", "sigma", "dd", "dsigma"};
  for (const auto& [k, v] : root.items()) {
    if (!known.contains(k)) rd.fail(root_path.key(k), "unknown field");
  }

  const Path modes_path = root_path.key("modes");
  const json& jm = rd.field(root, root_path, "modes");
  if (!jm.is_number_integer() || jm.get<long long>() < 1) rd.fail(modes_path, "expected a positive integer");
  const int m = jm.get<int>();
  const int n = 2 * m;

  const Path params_path = root_path.key("params");
  const json& jp = rd.field(root, root_path, "params");
  if (!jp.is_array() || jp.empty()) rd.fail(params_path, "expected a non-empty array of parameter names");
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (std::size_t k = 0; k < jp.size(); ++k) {
    if (!jp[k].is_string()) rd.fail(params_path.index(k), "expected a string");
    names.push_back(jp[k].get<std::string>());
    if (!seen.insert(names.back()).second) rd.fail(params_path.index(k), fmt::format("duplicate name \"{}\"", names.back()));
  }
  const std::size_t p = names.size();

  const Vec d = rd.vector(rd.field(root, root_path, "d"), root_path.key("d"), n);
  const Path sigma_path = root_path.key("sigma");
  const Mat sigma = rd.matrix(rd.field(root, root_path, "sigma"), sigma_path, n);
  rd.require_symmetric(sigma, sigma_path, kSymmetryTol * std::max(1.0, sigma.cwiseAbs().maxCoeff()));

  const Path dd_path = root_path.key("dd");
  const json& jdd = rd.array(rd.field(root, root_path, "dd"), dd_path, p);
  std::vector<Vec> dd;
  for (std::size_t k = 0; k < p; ++k) dd.push_back(rd.vector(jdd[k], dd_path.index(k), n));

  const Path ds_path = root_path.key("dsigma");
  const json& jds = rd.array(rd.field(root, root_path, "dsigma"), ds_path, p);
  std::vector<Mat> dsigma;
  for (std::size_t k = 0; k < p; ++k) {
    dsigma.push_back(rd.matrix(jds[k], ds_path.index(k), n));
    rd.require_symmetric(dsigma.back(), ds_path.index(k), kDsigmaSymTol);
  }

  GaussianState state(d, sigma);
  const StateReport report = validate_state(state);
  if (!report.valid) {
    std::string why;
    for (const auto& v : report.violations) why += (why.empty() ? "" : "; ") + v;
    rd.fail(sigma_path, fmt::format("not a valid covariance matrix: {}", why));
  }
  return ModelJet(std::move(state), std::move(dd), std::move(dsigma), std::move(names));
}

ModelJet load_jet_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument(fmt::format("cannot open jet file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_jet_json(buf.str(), path.string());
}

std::string jet_to_json(const ModelJet& jet, int indent) {
  json root;
  root["modes"] = jet.state().modes();
  root["params"] = jet.names();
  root["d"] = vector_json(jet.state().d());
  root["sigma"] = matrix_json(jet.state().sigma());
  json dd = json::array();
  json ds = json::array();
  for (int k = 0; k < jet.params(); ++k) {
    dd.push_back(vector_json(jet.dd()[k]));
    ds.push_back(matrix_json(jet.dsigma()[k]));
  }
  root["dd"] = std::move(dd);
  root["dsigma"] = std::move(ds);
  return root.dump(indent);
}

}  // namespace gaussbounds
