#include "groenewold/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "groenewold/error.hpp"
#include "groenewold/evolve.hpp"
#include "groenewold/presets.hpp"

namespace groenewold {

using nlohmann::json;

namespace {

// JSON pointer -> line of the member key (or array element) in the source text.
// The text has already been parsed by nlohmann, so it is known to be valid.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) : text_(text) {
    if (text_.empty()) return;
    skip_space();
    if (pos_ < text_.size()) value("");
  }

  std::optional<int> find(const std::string& pointer) const {
    auto it = lines_.find(pointer);
    if (it == lines_.end()) return std::nullopt;
    return it->second;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  void value(const std::string& pointer) {
    lines_.emplace(pointer, line_);
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_space();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const int key_line = line_;
        const std::string child = pointer + "/" + escape(string_token());
        skip_space();
        ++pos_;  // ':'
        skip_space();
        value(child);
        lines_[child] = key_line;
        skip_space();
        if (text_[pos_] == ',') {
          ++pos_;
          skip_space();
        }
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_space();
      int index = 0;
      while (pos_ < text_.size() && text_[pos_] != ']') {
        value(pointer + "/" + std::to_string(index++));
        skip_space();
        if (text_[pos_] == ',') {
          ++pos_;
          skip_space();
        }
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
             text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '}') {
        ++pos_;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::map<std::string, int> lines_;
};

struct Source {
  std::string origin;
  LineIndex index;
};

// Tracks where each part of the merged document came from.
class Schema {
 public:
  explicit Schema(std::vector<Source> sources) : sources_(std::move(sources)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    // user text first, it overrides the preset
    for (auto it = sources_.rbegin(); it != sources_.rend(); ++it) {
      std::string p = pointer;
      while (true) {
        if (auto line = it->index.find(p)) {
          throw ConfigError(it->origin + ":" + std::to_string(*line) + ": " + message);
        }
        if (p.empty()) break;
        p = p.substr(0, p.rfind('/'));
      }
    }
    throw ConfigError(message);
  }

  static std::string label(const std::string& pointer) {
    return pointer.empty() ? std::string("document") : "'" + pointer.substr(1) + "'";
  }

  const json& object(const json& parent, const std::string& pointer,
                     std::initializer_list<const char*> allowed) const {
    const json& j = pointer.empty() ? parent : parent.at(json::json_pointer(pointer));
    if (!j.is_object()) fail(pointer, label(pointer) + " must be an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items()) {
      if (!keys.count(key)) fail(pointer + "/" + key, "unknown key '" + key + "' in " + label(pointer));
    }
    return j;
  }

  double number(const json& j, const std::string& pointer) const {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
      try {
        return evaluate_expression(j.get<std::string>());
      } catch (const ConfigError& e) {
        fail(pointer, label(pointer) + ": " + e.what());
      }
    }
    fail(pointer, label(pointer) + " must be a number or numeric expression");
  }

  double number(const json& obj, const std::string& pointer, const char* key,
                std::optional<double> fallback = std::nullopt) const {
    const std::string p = pointer + "/" + key;
    if (!obj.contains(key)) {
      if (fallback) return *fallback;
      fail(pointer, "missing required key '" + std::string(key) + "' in " + label(pointer));
    }
    const double v = number(obj[key], p);
    if (!std::isfinite(v)) fail(p, label(p) + " must be finite");
    return v;
  }

  int integer(const json& obj, const std::string& pointer, const char* key,
              std::optional<int> fallback = std::nullopt) const {
    const std::string p = pointer + "/" + key;
    if (!obj.contains(key)) {
      if (fallback) return *fallback;
      fail(pointer, "missing required key '" + std::string(key) + "' in " + label(pointer));
    }
    const json& v = obj[key];
    if (!v.is_number_integer()) fail(p, label(p) + " must be an integer");
    return v.get<int>();
  }

  bool boolean(const json& obj, const std::string& pointer, const char* key, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    const std::string p = pointer + "/" + key;
    if (!obj[key].is_boolean()) fail(p, label(p) + " must be true or false");
    return obj[key].get<bool>();
  }

 private:
  std::vector<Source> sources_;
};

// Recursive descent over + - * / ^ ( ) pi sqrt.
class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  double parse() {
    const double v = sum();
    skip();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    throw ConfigError("bad expression \"" + std::string(text_) + "\": " + what);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double sum() {
    double v = product();
    while (true) {
      if (accept('+')) v += product();
      else if (accept('-')) v -= product();
      else return v;
    }
  }

  double product() {
    double v = unary();
    while (true) {
      if (accept('*')) v *= unary();
      else if (accept('/')) v /= unary();
      else return v;
    }
  }

  double unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    const double base = atom();
    if (accept('^')) return std::pow(base, unary());
    return base;
  }

  double atom() {
    skip();
    if (accept('(')) {
      const double v = sum();
      if (!accept(')')) error("missing ')'");
      return v;
    }
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view word = text_.substr(start, pos_ - start);
      if (word == "pi") return kPi;
      if (word == "sqrt") {
        if (!accept('(')) error("sqrt needs '('");
        const double v = sum();
        if (!accept(')')) error("missing ')'");
        if (v < 0.0) error("sqrt of a negative number");
        return std::sqrt(v);
      }
      error("unknown name '" + std::string(word) + "'");
    }
    const std::string rest(text_.substr(pos_));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      error("expected a number");
    }
    pos_ += used;
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

json parse_json(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based
    const std::size_t upto = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
    std::string what = e.what();
    const auto colon = what.find("parse error");
    if (colon != std::string::npos) what = what.substr(colon);
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
  }
}

ModelSpec read_model(const Schema& s, const json& root) {
  const json& m = s.object(root, "/model", {"K", "b", "mu", "hbar", "m", "omega", "E"});
  if (!m.contains("b")) s.fail("/model", "missing required key 'b' in 'model'");
  if (!m["b"].is_array() || m["b"].size() < 2) {
    s.fail("/model/b", "'model/b' must be an array of at least two coefficients");
  }
  std::vector<double> b;
  for (std::size_t k = 0; k < m["b"].size(); ++k) {
    b.push_back(s.number(m["b"][k], "/model/b/" + std::to_string(k)));
  }
  while (b.size() > 2 && b.back() == 0.0) b.pop_back();
  if (b.back() == 0.0) s.fail("/model/b", "'model/b' has a zero leading coefficient");
  if (b[1] == 0.0 && b.size() == 2) s.fail("/model/b", "'model/b' describes a constant Hamiltonian");
  if (m.contains("K") && s.integer(m, "/model", "K") != static_cast<int>(b.size()) - 1) {
    s.fail("/model/K", "'model/K' disagrees with the length of 'model/b'");
  }
  const double mass = s.number(m, "/model", "m", 1.0);
  const double omega = s.number(m, "/model", "omega", 1.0);
  const double energy = s.number(m, "/model", "E", 1.0);
  if (mass <= 0.0) s.fail("/model/m", "'model/m' must be positive");
  if (omega <= 0.0) s.fail("/model/omega", "'model/omega' must be positive");
  if (energy <= 0.0) s.fail("/model/E", "'model/E' must be positive");
  const bool has_mu = m.contains("mu");
  const bool has_hbar = m.contains("hbar");
  if (has_mu == has_hbar) s.fail("/model", "'model' needs exactly one of 'mu' and 'hbar'");
  try {
    if (has_mu) {
      const double mu = s.number(m, "/model", "mu");
      if (mu <= 0.0) s.fail("/model/mu", "'model/mu' must be positive");
      return make_model(b, mu, mass, omega, energy);
    }
    const double hbar = s.number(m, "/model", "hbar");
    if (hbar <= 0.0) s.fail("/model/hbar", "'model/hbar' must be positive");
    return make_model_physical(b, hbar, mass, omega, energy);
  } catch (const InvalidArgument& e) {
    s.fail("/model", e.what());
  }
}

void read_state(const Schema& s, const json& root, ExperimentConfig& cfg) {
  const json& st = s.object(root, "/state",
                            {"kind", "kappa", "alpha0_re", "alpha0_im", "gamma", "q0", "p0"});
  if (st.contains("kind")) {
    const json& k = st["kind"];
    if (!k.is_string() || (k != "groenewold" && k != "coherent")) {
      s.fail("/state/kind", "'state/kind' must be \"groenewold\" or \"coherent\"");
    }
    cfg.coherent = k == "coherent";
  }
  const bool phase = st.contains("alpha0_re") || st.contains("alpha0_im") || st.contains("kappa");
  const bool physical = st.contains("gamma") || st.contains("q0") || st.contains("p0");
  if (phase == physical) {
    s.fail("/state", "'state' needs either kappa/alpha0_re/alpha0_im or gamma/q0/p0");
  }
  const ModelSpec& model = cfg.model;
  if (phase) {
    const double kappa = s.number(st, "/state", "kappa", cfg.coherent ? 2.0 : std::optional<double>());
    if (kappa <= 0.0) s.fail("/state/kappa", "'state/kappa' must be positive");
    if (cfg.coherent && kappa != 2.0) {
      s.fail("/state/kappa", "a coherent state has kappa = 2");
    }
    const Complex a0(s.number(st, "/state", "alpha0_re", 0.0), s.number(st, "/state", "alpha0_im", 0.0));
    cfg.state = gaussian_state(kappa, a0);
  } else {
    const double gamma = s.number(st, "/state", "gamma");
    if (gamma <= 0.0) s.fail("/state/gamma", "'state/gamma' must be positive");
    cfg.state = gaussian_from_physical(gamma, s.number(st, "/state", "q0", 0.0),
                                       s.number(st, "/state", "p0", 0.0), model.m, model.omega,
                                       model.hbar);
    if (cfg.coherent && std::abs(cfg.state.kappa - 2.0) > 1e-12) {
      s.fail("/state/gamma", "a coherent state has gamma^2 = hbar omega / 2");
    }
  }
}

PhaseGrid read_grid(const Schema& s, const json& root, const std::string& pointer) {
  PhaseGrid g;
  if (!root.contains(json::json_pointer(pointer))) return g;
  const json& j = s.object(root, pointer, {"q_min", "q_max", "p_min", "p_max", "nq", "np"});
  g.q_min = s.number(j, pointer, "q_min", g.q_min);
  g.q_max = s.number(j, pointer, "q_max", g.q_max);
  g.p_min = s.number(j, pointer, "p_min", g.p_min);
  g.p_max = s.number(j, pointer, "p_max", g.p_max);
  g.nq = s.integer(j, pointer, "nq", g.nq);
  g.np = s.integer(j, pointer, "np", g.np);
  if (g.nq < 1 || g.np < 1 || g.nq > 4096 || g.np > 4096) {
    s.fail(pointer, "grid sizes must lie in [1, 4096]");
  }
  if (!(g.q_max > g.q_min) || !(g.p_max > g.p_min)) s.fail(pointer, "grid extent is empty");
  return g;
}

void read_outputs(const Schema& s, const json& root, ExperimentConfig& cfg) {
  if (!root.contains("outputs")) return;
  const json& o =
      s.object(root, "/outputs", {"moments", "spectrum", "negativity", "field", "validate"});
  cfg.moments = s.boolean(o, "/outputs", "moments", cfg.moments);
  cfg.negativity = s.boolean(o, "/outputs", "negativity", cfg.negativity);

  if (o.contains("spectrum")) {
    if (o["spectrum"].is_boolean()) {
      cfg.spectrum_k = o["spectrum"].get<bool>() ? 2 : 0;
    } else {
      const json& sp = s.object(root, "/outputs/spectrum", {"k"});
      cfg.spectrum_k = s.integer(sp, "/outputs/spectrum", "k", 2);
      if (cfg.spectrum_k < 1) s.fail("/outputs/spectrum/k", "'outputs/spectrum/k' must be positive");
    }
  }

  if (o.contains("validate")) {
    if (o["validate"].is_boolean()) {
      cfg.validate = o["validate"].get<bool>();
    } else {
      const json& v = s.object(root, "/outputs/validate", {"nu_max"});
      cfg.validate = true;
      cfg.validate_nu_max = s.integer(v, "/outputs/validate", "nu_max", cfg.validate_nu_max);
      if (cfg.validate_nu_max < 0) s.fail("/outputs/validate/nu_max", "'nu_max' must be non-negative");
    }
  }

  if (o.contains("field")) {
    const json& f = s.object(root, "/outputs/field", {"grid", "times", "kinds"});
    FieldSpec field;
    field.grid = read_grid(s, root, "/outputs/field/grid");
    if (!f.contains("times") || !f["times"].is_array() || f["times"].empty()) {
      s.fail("/outputs/field", "'outputs/field/times' must be a non-empty array");
    }
    for (std::size_t i = 0; i < f["times"].size(); ++i) {
      const std::string p = "/outputs/field/times/" + std::to_string(i);
      const double t = s.number(f["times"][i], p);
      if (!std::isfinite(t) || t < 0.0) s.fail(p, "field times must be finite and non-negative");
      field.times.push_back(t);
    }
    std::sort(field.times.begin(), field.times.end());
    field.times.erase(std::unique(field.times.begin(), field.times.end()), field.times.end());
    if (!f.contains("kinds") || !f["kinds"].is_array() || f["kinds"].empty()) {
      s.fail("/outputs/field", "'outputs/field/kinds' must be a non-empty array");
    }
    for (std::size_t i = 0; i < f["kinds"].size(); ++i) {
      const json& k = f["kinds"][i];
      const std::string p = "/outputs/field/kinds/" + std::to_string(i);
      if (k == "whorl") field.whorl = true;
      else if (k == "wigner") field.wigner = true;
      else s.fail(p, "field kinds are \"whorl\" and \"wigner\"");
    }
    cfg.field = field;
  }
}

}  // namespace

double evaluate_expression(std::string_view text) { return ExpressionParser(text).parse(); }

std::vector<double> ExperimentConfig::times() const { return time_grid(t0, t1, steps); }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::optional<std::string_view> find_preset(std::string_view name) {
  for (const auto& p : bundled_presets()) {
    if (p.name == name) return p.json;
  }
  return std::nullopt;
}

ExperimentConfig parse_config(std::string_view text, std::string_view origin,
                              std::string_view preset) {
  std::vector<Source> sources;
  json root = json::object();
  std::string name;
  if (!preset.empty()) {
    const auto preset_text = find_preset(preset);
    if (!preset_text) {
      std::string known;
      for (const auto& p : bundled_presets()) known += (known.empty() ? "" : ", ") + std::string(p.name);
      throw ConfigError("unknown preset '" + std::string(preset) + "' (available: " + known + ")");
    }
    const std::string label = "preset " + std::string(preset);
    root = parse_json(*preset_text, label);
    sources.push_back({label, LineIndex(*preset_text)});
    name = std::string(preset);
  }
  if (!text.empty()) {
    const std::string label(origin);
    const json doc = parse_json(text, label);
    if (!doc.is_object()) throw ConfigError(label + ":1: configuration must be a JSON object");
    sources.push_back({label, LineIndex(text)});
    root.merge_patch(doc);
  }
  if (sources.empty()) throw ConfigError("no configuration given");

  const Schema s(std::move(sources));
  s.object(root, "", {"name", "model", "state", "truncation", "dynamics", "times", "outputs"});
  for (const char* key : {"model", "state", "dynamics", "times"}) {
    if (!root.contains(key)) s.fail("", "missing required key '" + std::string(key) + "'");
  }

  ExperimentConfig cfg;
  if (root.contains("name")) {
    if (!root["name"].is_string()) s.fail("/name", "'name' must be a string");
    name = root["name"].get<std::string>();
  }
  cfg.name = name.empty() ? std::string("experiment") : name;
  cfg.model = read_model(s, root);
  read_state(s, root, cfg);

  if (root.contains("truncation")) {
    const json& t = s.object(root, "/truncation", {"N", "guard", "tail_tol"});
    cfg.truncation.N = s.integer(t, "/truncation", "N", cfg.truncation.N);
    cfg.truncation.guard = s.integer(t, "/truncation", "guard", cfg.truncation.guard);
    cfg.truncation.tail_tol = s.number(t, "/truncation", "tail_tol", cfg.truncation.tail_tol);
    if (cfg.truncation.N < 8 || cfg.truncation.N > 1024) {
      s.fail("/truncation/N", "'truncation/N' must lie in [8, 1024]");
    }
    if (cfg.truncation.guard < 1 || cfg.truncation.guard >= cfg.truncation.N) {
      s.fail("/truncation/guard", "'truncation/guard' must lie in [1, N)");
    }
    if (!(cfg.truncation.tail_tol > 0.0)) {
      s.fail("/truncation/tail_tol", "'truncation/tail_tol' must be positive");
    }
  }

  const json& dyn = root["dynamics"];
  if (!dyn.is_array()) s.fail("/dynamics", "'dynamics' must be an array");
  if (dyn.empty()) s.fail("/dynamics", "'dynamics' must name at least one dynamics");
  for (std::size_t i = 0; i < dyn.size(); ++i) {
    const std::string p = "/dynamics/" + std::to_string(i);
    if (!dyn[i].is_string()) s.fail(p, "dynamics entries must be strings");
    try {
      const Dynamics d = Dynamics::parse(dyn[i].get<std::string>());
      if (std::find(cfg.dynamics.begin(), cfg.dynamics.end(), d) != cfg.dynamics.end()) {
        s.fail(p, "dynamics '" + d.name() + "' listed twice");
      }
      cfg.dynamics.push_back(d);
    } catch (const InvalidArgument& e) {
      s.fail(p, e.what());
    }
  }

  const json& t = s.object(root, "/times", {"t0", "t1", "steps"});
  cfg.t0 = s.number(t, "/times", "t0", 0.0);
  cfg.t1 = s.number(t, "/times", "t1");
  cfg.steps = s.integer(t, "/times", "steps");
  if (cfg.steps < 0 || cfg.steps > 100000) s.fail("/times/steps", "'times/steps' must lie in [0, 100000]");
  if (cfg.t0 < 0.0) s.fail("/times/t0", "'times/t0' must be non-negative");
  if (cfg.steps > 0 && !(cfg.t1 > cfg.t0)) s.fail("/times/t1", "'times/t1' must exceed 't0'");

  read_outputs(s, root, cfg);

  cfg.resolved = root;
  cfg.hash = fnv1a_hex(root.dump());
  return cfg;
}

ExperimentConfig load_config(const std::string& path, std::string_view preset) {
  std::string text;
  if (!path.empty()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw ConfigError(path + ":1: empty configuration");
    }
  }
  return parse_config(text, path, preset);
}

}  // namespace groenewold
