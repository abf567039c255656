#pragma once

// Command-line front end: symbol, s2, scan, verify.
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 budget error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "hecke/charsum.hpp"
#include "hecke/error.hpp"
#include "hecke/report.hpp"
#include "hecke/symbols.hpp"
#include "hecke/verify.hpp"

namespace hecke::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

inline std::string format_symbol(SymbolValue s) {
  if (s.is_zero()) return "0";
  static const char* names[] = {"1", "i", "-1", "-i"};
  return names[s.exponent()];
}

namespace detail {

// Flag storage; every flag maps onto a config key so that files and flags go
// through the same parser.
struct FlagSet {
  std::map<std::string, std::string> values;
  std::vector<std::pair<CLI::Option*, std::string>> bound;
  std::string config_path;
  bool no_timings = false;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    bound.emplace_back(app->add_option(flag, values[key], help), key);
  }

  std::map<std::string, std::string> given() const {
    std::map<std::string, std::string> out;
    for (const auto& [opt, key] : bound)
      if (opt->count() > 0) out[key] = values.at(key);
    if (no_timings) out["no_timings"] = "true";
    return out;
  }
};

inline void add_common(CLI::App* sub, FlagSet& f) {
  sub->add_option("--config", f.config_path, "key=value config file; flags override it");
  f.add(sub, "--threads", "threads", "worker threads (default $HECKE_THREADS or 1)");
  f.add(sub, "--out", "out", "output path (default stdout)");
  sub->add_flag("--no-timings", f.no_timings, "write 0 for timings so output is reproducible");
}

inline void add_sum_options(CLI::App* sub, FlagSet& f) {
  f.add(sub, "--method", "method", "direct | poisson | both");
  f.add(sub, "--phi-support", "phi_support", "support of Phi as lo,hi");
  f.add(sub, "--w-support", "w_support", "support of W as lo,hi");
  f.add(sub, "--phi-amplitude", "phi_amplitude", "amplitude of Phi");
  f.add(sub, "--w-amplitude", "w_amplitude", "amplitude of W");
  f.add(sub, "--eps-tail", "eps_tail", "dual-sum tail target");
  f.add(sub, "--k-cap-scale", "k_cap_scale", "multiplier on the dual norm cap");
  f.add(sub, "--work-budget", "work_budget", "max (m, n) pairs for the direct path");
}

inline RunConfig resolve(const std::string& command, const FlagSet& f) {
  RunConfig c;
  if (!f.config_path.empty()) c = config_from_map(read_config_file(f.config_path), c);
  c = config_from_map(f.given(), c);
  c.command = command;
  if (!(c.eps_tail > 0.0)) throw DomainError("eps-tail must be positive");
  if (!(c.k_cap_scale > 0.0)) throw DomainError("k-cap-scale must be positive");
  if (!(c.work_budget > 0.0)) throw DomainError("work-budget must be positive");
  validate(c.phi);
  validate(c.w);
  return c;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw DomainError("cannot open output file: " + path);
      os_ = file_.get();
    }
  }
  std::ostream& stream() { return *os_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

inline int cmd_symbol(GaussianInt a, GaussianInt n, std::ostream& out) {
  if (n.is_zero() || norm(n) % 2 == 0) throw DomainError("symbol: n must have odd norm");
  out << "a=" << to_string(a) << " n=" << to_string(n) << "\n";
  out << "quartic=" << format_symbol(quartic_symbol(a, n)) << "\n";
  out << "quadratic=" << quadratic_symbol(a, n) << "\n";
  return kExitOk;
}

inline int cmd_s2(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.x) throw DomainError("s2: --x is required");
  if (!c.y) throw DomainError("s2: --y is required");
  const SumReport r = evaluate(*c.x, *c.y, c.phi, c.w, c.method, c.policy());
  Output o(c.out, out);
  o.stream() << sum_report_json(r, c);
  o.stream().flush();
  if (auto d = r.discrepancy()) {
    std::ostream& note = o.to_file() ? out : err;
    note << "discrepancy abs=" << format_double(*d)
         << " rel=" << format_double(*d / std::max(std::abs(r.direct->value), 1e-300)) << "\n";
  }
  return kExitOk;
}

inline int cmd_scan(const RunConfig& c, std::ostream& out) {
  Output o(c.out, out);
  auto& os = o.stream();
  os << kScanCsvHeader << "\n";
  os.flush();
  for (double x : c.x_grid.points()) {
    const double y = c.y_rule(x);
    const SumReport r = evaluate(x, y, c.phi, c.w, c.method, c.policy());
    os << scan_csv_row(r, !c.no_timings) << "\n";
    os.flush();
  }
  return kExitOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!is_suite(c.suite)) throw DomainError("unknown suite: " + c.suite);
  const auto results = run_suite(c.suite, c.threads);
  Output o(c.out, out);
  o.stream() << verify_report_json(results, c);
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.pass;
    if (!r.pass) err << "FAILED " << r.suite << "/" << r.name << ": " << r.detail << "\n";
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Smoothed quadratic character sums over the Gaussian integers"};
  app.require_subcommand(1);

  std::string a_text = "0,1", n_text;
  auto* symbol = app.add_subcommand("symbol", "quartic and quadratic residue symbols (a/n)");
  symbol->add_option("--a", a_text, "numerator as re,im");
  symbol->add_option("--n", n_text, "modulus as re,im (odd norm)")->required();

  detail::FlagSet s2_flags;
  auto* s2 = app.add_subcommand("s2", "evaluate S2(X, Y) and its main-term candidates");
  s2_flags.add(s2, "--x", "x", "X");
  s2_flags.add(s2, "--y", "y", "Y");
  detail::add_sum_options(s2, s2_flags);
  detail::add_common(s2, s2_flags);

  detail::FlagSet scan_flags;
  auto* scan = app.add_subcommand("scan", "CSV scan over a geometric X grid");
  scan_flags.add(scan, "--x-grid", "x_grid", "start:stop:count");
  scan_flags.add(scan, "--y-rule", "y_rule", "fixed:V or power:alpha");
  detail::add_sum_options(scan, scan_flags);
  detail::add_common(scan, scan_flags);

  detail::FlagSet verify_flags;
  auto* verify = app.add_subcommand("verify", "run built-in property suites");
  verify_flags.add(verify, "--suite", "suite", "gauss | poisson | series | all");
  detail::add_common(verify, verify_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*symbol) return detail::cmd_symbol(parse_gaussian(a_text), parse_gaussian(n_text), out);
    if (*s2) return detail::cmd_s2(detail::resolve("s2", s2_flags), out, err);
    if (*scan) return detail::cmd_scan(detail::resolve("scan", scan_flags), out);
    if (*verify) return detail::cmd_verify(detail::resolve("verify", verify_flags), out, err);
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    err << "hint: the direct path is quadratic in the input size; try --method poisson\n";
    return kExitBudget;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  return kExitUsage;
}

}  // namespace hecke::cli
