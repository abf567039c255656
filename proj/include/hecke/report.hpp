#pragma once

// Run configuration (flat key=value files), JSON reports and scan CSV rows.
// Floats are written with 17 significant digits via std::to_chars, so the
// output never depends on the C locale.

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "hecke/charsum.hpp"
#include "hecke/error.hpp"
#include "hecke/gint.hpp"
#include "hecke/series.hpp"
#include "hecke/smooth.hpp"
#include "hecke/verify.hpp"

namespace hecke {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// Shortest text that parses back to the same double.
inline std::string format_double_short(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) throw DomainError("invalid number for " + what + ": '" + s + "'");
  return v;
}

inline i64 parse_int(const std::string& s, const std::string& what) {
  i64 v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) throw DomainError("invalid integer for " + what + ": '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// "re,im"
inline GaussianInt parse_gaussian(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw DomainError("expected re,im but got '" + s + "'");
  return {parse_int(trim(parts[0]), "re"), parse_int(trim(parts[1]), "im")};
}

inline std::string format_gaussian(GaussianInt z) { return std::to_string(z.re) + "," + std::to_string(z.im); }

// "lo,hi"
inline std::pair<double, double> parse_support(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw DomainError("expected lo,hi but got '" + s + "'");
  return {parse_double(trim(parts[0]), "support lo"), parse_double(trim(parts[1]), "support hi")};
}

// Geometric grid "start:stop:count".
struct XGrid {
  double start = 1e4;
  double stop = 1e6;
  int count = 3;

  std::vector<double> points() const {
    std::vector<double> out;
    if (count == 1) return {start};
    for (int i = 0; i < count; ++i)
      out.push_back(i + 1 == count ? stop : start * std::pow(stop / start, static_cast<double>(i) / (count - 1)));
    return out;
  }
  friend bool operator==(const XGrid&, const XGrid&) = default;
};

inline XGrid parse_x_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw DomainError("x-grid must be start:stop:count");
  XGrid g{parse_double(parts[0], "grid start"), parse_double(parts[1], "grid stop"),
          static_cast<int>(parse_int(parts[2], "grid count"))};
  if (!(g.start >= 1.0) || !(g.stop >= g.start) || g.count < 1) throw DomainError("x-grid must be non-empty with 1 <= start <= stop");
  if (g.count == 1 && g.stop != g.start) throw DomainError("x-grid with one point needs start == stop");
  return g;
}

inline std::string format_x_grid(const XGrid& g) {
  return format_double_short(g.start) + ":" + format_double_short(g.stop) + ":" + std::to_string(g.count);
}

// Y as a function of X: "fixed:V" or "power:alpha".
struct YRule {
  enum class Kind { kFixed, kPower } kind = Kind::kPower;
  double param = 0.5;

  double operator()(double x) const { return kind == Kind::kFixed ? param : std::pow(x, param); }
  friend bool operator==(const YRule&, const YRule&) = default;
};

inline YRule parse_y_rule(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw DomainError("y-rule must be fixed:V or power:alpha");
  YRule r;
  if (parts[0] == "fixed") r.kind = YRule::Kind::kFixed;
  else if (parts[0] == "power") r.kind = YRule::Kind::kPower;
  else throw DomainError("y-rule must be fixed:V or power:alpha");
  r.param = parse_double(parts[1], "y-rule parameter");
  if (r.kind == YRule::Kind::kFixed && !(r.param >= 1.0)) throw DomainError("fixed Y must be >= 1");
  if (r.kind == YRule::Kind::kPower && !(r.param > 0.0)) throw DomainError("power must be positive");
  return r;
}

inline std::string format_y_rule(const YRule& r) {
  return std::string(r.kind == YRule::Kind::kFixed ? "fixed:" : "power:") + format_double_short(r.param);
}

struct RunConfig {
  std::string command;
  // symbol
  GaussianInt a{0, 1};
  GaussianInt n{-1, 2};
  // s2 / scan
  std::optional<double> x;
  std::optional<double> y;
  Method method = Method::kPoisson;
  SmoothWeight phi;
  SmoothWeight w;
  double eps_tail = TruncationPolicy{}.eps_tail;
  double k_cap_scale = 1.0;
  double work_budget = TruncationPolicy{}.work_budget;
  XGrid x_grid;
  YRule y_rule;
  // verify
  std::string suite = "all";
  // output
  std::string out;
  bool no_timings = false;
  // Execution only; never embedded in outputs.
  unsigned threads = default_threads();

  TruncationPolicy policy() const {
    TruncationPolicy p;
    p.eps_tail = eps_tail;
    p.k_cap_scale = k_cap_scale;
    p.work_budget = work_budget;
    p.threads = threads;
    return p;
  }

  // Equality of everything that affects output content.
  bool equivalent(const RunConfig& o) const {
    return command == o.command && a == o.a && n == o.n && x == o.x && y == o.y && method == o.method &&
           phi == o.phi && w == o.w && eps_tail == o.eps_tail && k_cap_scale == o.k_cap_scale &&
           work_budget == o.work_budget && x_grid == o.x_grid && y_rule == o.y_rule && suite == o.suite &&
           out == o.out && no_timings == o.no_timings;
  }
};

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "command",     "a",           "n",         "x",         "y",        "method",      "phi_support",
      "phi_amplitude", "w_support", "w_amplitude", "eps_tail", "k_cap_scale", "work_budget", "x_grid",
      "y_rule",      "suite",       "out",       "no_timings", "threads"};
  return keys;
}

inline bool parse_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw DomainError("invalid boolean for " + what + ": '" + s + "'");
}

inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "command") c.command = value;
  else if (key == "a") c.a = parse_gaussian(value);
  else if (key == "n") c.n = parse_gaussian(value);
  else if (key == "x") c.x = parse_double(value, key);
  else if (key == "y") c.y = parse_double(value, key);
  else if (key == "method") c.method = method_from_string(value);
  else if (key == "phi_support") std::tie(c.phi.support_lo, c.phi.support_hi) = parse_support(value);
  else if (key == "phi_amplitude") c.phi.amplitude = parse_double(value, key);
  else if (key == "w_support") std::tie(c.w.support_lo, c.w.support_hi) = parse_support(value);
  else if (key == "w_amplitude") c.w.amplitude = parse_double(value, key);
  else if (key == "eps_tail") c.eps_tail = parse_double(value, key);
  else if (key == "k_cap_scale") c.k_cap_scale = parse_double(value, key);
  else if (key == "work_budget") c.work_budget = parse_double(value, key);
  else if (key == "x_grid") c.x_grid = parse_x_grid(value);
  else if (key == "y_rule") c.y_rule = parse_y_rule(value);
  else if (key == "suite") c.suite = value;
  else if (key == "out") c.out = value;
  else if (key == "no_timings") c.no_timings = parse_bool(value, key);
  else if (key == "threads") {
    const i64 t = parse_int(value, key);
    if (t < 1) throw DomainError("threads must be positive");
    c.threads = static_cast<unsigned>(t);
  } else {
    throw DomainError("unknown config key: " + key);
  }
}

// key=value lines; '#' starts a comment.
inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

// Resolved settings in config_keys() order, without `threads`.
inline std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c) {
  auto support = [](const SmoothWeight& w) {
    return format_double_short(w.support_lo) + "," + format_double_short(w.support_hi);
  };
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("command", c.command);
  e.emplace_back("a", format_gaussian(c.a));
  e.emplace_back("n", format_gaussian(c.n));
  if (c.x) e.emplace_back("x", format_double_short(*c.x));
  if (c.y) e.emplace_back("y", format_double_short(*c.y));
  e.emplace_back("method", to_string(c.method));
  e.emplace_back("phi_support", support(c.phi));
  e.emplace_back("phi_amplitude", format_double_short(c.phi.amplitude));
  e.emplace_back("w_support", support(c.w));
  e.emplace_back("w_amplitude", format_double_short(c.w.amplitude));
  e.emplace_back("eps_tail", format_double_short(c.eps_tail));
  e.emplace_back("k_cap_scale", format_double_short(c.k_cap_scale));
  e.emplace_back("work_budget", format_double_short(c.work_budget));
  e.emplace_back("x_grid", format_x_grid(c.x_grid));
  e.emplace_back("y_rule", format_y_rule(c.y_rule));
  e.emplace_back("suite", c.suite);
  e.emplace_back("out", c.out);
  e.emplace_back("no_timings", c.no_timings ? "true" : "false");
  return e;
}

inline std::string serialize_config(const RunConfig& c) {
  std::string s;
  for (const auto& [k, v] : config_entries(c)) s += k + "=" + v + "\n";
  return s;
}

inline RunConfig config_from_map(const std::map<std::string, std::string>& m, RunConfig base = {}) {
  for (const auto& [k, v] : m) apply_setting(base, k, v);
  return base;
}

// Minimal streaming JSON emitter with two-space indentation.
class JsonWriter {
 public:
  std::string str() const { return out_ + "\n"; }

  JsonWriter& begin_object() { return open('{'); }
  JsonWriter& end_object() { return close('}'); }
  JsonWriter& begin_array() { return open('['); }
  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(const std::string& k) {
    separator();
    out_ += quote(k) + ": ";
    pending_key_ = true;
    return *this;
  }
  JsonWriter& value(double v) {
    if (!std::isfinite(v)) return raw("null");
    return raw(format_double(v));
  }
  JsonWriter& value(std::optional<double> v) { return v ? value(*v) : raw("null"); }
  JsonWriter& value(i64 v) { return raw(std::to_string(v)); }
  JsonWriter& value(std::uint64_t v) { return raw(std::to_string(v)); }
  JsonWriter& value(int v) { return raw(std::to_string(v)); }
  JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
  JsonWriter& value(const std::string& v) { return raw(quote(v)); }
  JsonWriter& value(const char* v) { return raw(quote(v)); }
  JsonWriter& null() { return raw("null"); }

  template <typename T>
  JsonWriter& field(const std::string& k, const T& v) {
    key(k);
    return value(v);
  }

  static std::string quote(const std::string& s) {
    std::string q = "\"";
    for (unsigned char c : s) {
      switch (c) {
        case '"': q += "\\\""; break;
        case '\\': q += "\\\\"; break;
        case '\n': q += "\\n"; break;
        case '\t': q += "\\t"; break;
        case '\r': q += "\\r"; break;
        default:
          if (c < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            q += buf;
          } else {
            q += static_cast<char>(c);
          }
      }
    }
    return q + "\"";
  }

 private:
  JsonWriter& raw(const std::string& text) {
    if (!pending_key_) separator();
    pending_key_ = false;
    out_ += text;
    return *this;
  }
  JsonWriter& open(char c) {
    if (!pending_key_) separator();
    pending_key_ = false;
    out_ += c;
    first_.push_back(true);
    return *this;
  }
  JsonWriter& close(char c) {
    const bool empty = first_.back();
    first_.pop_back();
    if (!empty) newline();
    out_ += c;
    return *this;
  }
  void separator() {
    if (first_.empty()) return;
    if (!first_.back()) out_ += ',';
    first_.back() = false;
    newline();
  }
  void newline() {
    out_ += '\n';
    out_.append(2 * first_.size(), ' ');
  }

  std::string out_;
  std::vector<bool> first_;
  bool pending_key_ = false;
};

inline constexpr const char* kSumReportSchema = "hecke.sum_report/1";
inline constexpr const char* kVerifyReportSchema = "hecke.verify_report/1";

inline void write_config(JsonWriter& j, const RunConfig& c) {
  j.key("config").begin_object();
  for (const auto& [k, v] : config_entries(c)) j.field(k, v);
  j.end_object();
}

inline void write_weight(JsonWriter& j, const std::string& name, const SmoothWeight& w) {
  j.key(name).begin_object();
  j.field("kind", to_string(w.kind));
  j.field("support_lo", w.support_lo);
  j.field("support_hi", w.support_hi);
  j.field("amplitude", w.amplitude);
  j.end_object();
}

inline std::string sum_report_json(const SumReport& r, const RunConfig& c) {
  const bool timings = !c.no_timings;
  JsonWriter j;
  j.begin_object();
  j.field("schema", kSumReportSchema);
  write_config(j, c);
  j.field("X", r.x);
  j.field("Y", r.y);
  j.key("weights").begin_object();
  write_weight(j, "phi", r.phi);
  write_weight(j, "w", r.w);
  j.end_object();
  j.key("policy").begin_object();
  j.field("eps_tail", r.policy.eps_tail);
  j.field("k_cap_scale", r.policy.k_cap_scale);
  j.field("work_budget", r.policy.work_budget);
  j.field("n_norm_cap", r.policy.n_norm_cap);
  j.field("parity_sign", r.policy.parity_sign);
  j.end_object();
  j.field("method", to_string(r.method));
  j.field("s2_direct", r.direct ? std::optional<double>(r.direct->value) : std::nullopt);
  j.field("s2_poisson", r.poisson ? std::optional<double>(r.poisson->value) : std::nullopt);
  j.field("discrepancy", r.discrepancy());
  std::optional<double> rel;
  if (auto d = r.discrepancy()) rel = *d / std::max(std::abs(r.direct->value), 1e-300);
  j.field("relative_discrepancy", rel);
  j.field("m0", r.m0);
  j.key("candidates").begin_object();
  for (const auto& [k, v] : r.candidates.as_map()) j.field(k, v);
  j.end_object();
  j.field("closest_candidate", r.candidates.closest());
  j.field("ratio_s2_m0", r.ratio_s2_m0());
  j.key("theta").begin_object();
  j.field("numerator", theta().num);
  j.field("denominator", theta().den);
  j.end_object();
  j.field("err_envelope_theta", r.envelope());
  j.key("counts").begin_object();
  j.field("direct", r.direct ? r.direct->terms : std::uint64_t{0});
  j.field("poisson", r.poisson ? r.poisson->terms : std::uint64_t{0});
  j.end_object();
  j.key("timings").begin_object();
  j.field("direct_seconds", r.direct && timings ? r.direct->seconds : 0.0);
  j.field("poisson_seconds", r.poisson && timings ? r.poisson->seconds : 0.0);
  j.end_object();
  j.end_object();
  return j.str();
}

inline std::string verify_report_json(const std::vector<CheckResult>& results, const RunConfig& c) {
  JsonWriter j;
  j.begin_object();
  j.field("schema", kVerifyReportSchema);
  write_config(j, c);
  bool ok = true;
  for (const auto& r : results) ok = ok && r.pass;
  j.field("pass", ok);
  j.key("checks").begin_array();
  for (const auto& r : results) {
    j.begin_object();
    j.field("suite", r.suite);
    j.field("name", r.name);
    j.field("pass", r.pass);
    j.field("cases", static_cast<std::uint64_t>(r.cases));
    j.field("failures", static_cast<std::uint64_t>(r.failures));
    j.field("worst_error", r.measured);
    j.field("tolerance", r.tolerance);
    j.field("seconds", c.no_timings ? 0.0 : r.seconds);
    j.field("detail", r.detail);
    j.end_object();
  }
  j.end_array();
  j.key("failures").begin_array();
  for (const auto& r : results)
    if (!r.pass) j.value(r.suite + "/" + r.name);
  j.end_array();
  j.end_object();
  return j.str();
}

// Scan CSV. Column order is frozen; readers identify the schema by this row.
inline constexpr const char* kScanCsvHeader =
    "X,Y,s2,m0,cand_paper_pointwise,cand_mellin,ratio_s2_m0,err_envelope_theta,seconds,terms";

inline std::string scan_csv_row(const SumReport& r, bool timings) {
  const PathResult& p = r.poisson ? *r.poisson : *r.direct;
  double seconds = 0.0;
  if (timings) seconds = (r.direct ? r.direct->seconds : 0.0) + (r.poisson ? r.poisson->seconds : 0.0);
  std::string s;
  for (double v : {r.x, r.y, r.s2(), r.m0, r.candidates.paper_pointwise, r.candidates.mellin_variant,
                   r.ratio_s2_m0(), r.envelope(), seconds}) {
    s += format_double(v);
    s += ',';
  }
  s += std::to_string(p.terms);
  return s;
}

}  // namespace hecke
