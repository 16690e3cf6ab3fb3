#ifndef MALMSTEN_CLI_APP_HPP
#define MALMSTEN_CLI_APP_HPP

// Command-line front end.
//
//   malmsten eval   --which {a|b|c} [--a A] [--b B] [--format json|csv]
//   malmsten quad   --which {a|b|c} [--a A] [--b B] [--rel-tol R] [--format json|csv]
//   malmsten verify --grid A1,A2,... [--tol T] [--format json|csv]
//   malmsten table  --a-min LO --a-max HI --steps N [--format json|csv]
//
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 quadrature did not converge.
// Data goes to `out`, diagnostics to `err`.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "malmsten/closedform.hpp"
#include "malmsten/proofchain.hpp"
#include "malmsten/quad.hpp"
#include "malmsten/report_io.hpp"

namespace malmsten::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kNotConverged = 3,
};

inline constexpr int max_table_steps = 100'000;
inline constexpr std::size_t max_grid_points = 10'000;

/// Thrown for anything the user got wrong; maps to exit code 2.
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double parse_real(std::string_view text, std::string_view what) {
  // from_chars rejects a leading '+', which users reasonably type.
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw usage_error(std::string(what) + ": not a number: '" + std::string(text) + "'");
  }
  if (!std::isfinite(v)) throw usage_error(std::string(what) + ": must be finite");
  return v;
}

inline int parse_int(std::string_view text, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw usage_error(std::string(what) + ": not an integer: '" + std::string(text) + "'");
  }
  return v;
}

inline std::vector<double> parse_grid(std::string_view text) {
  if (text.empty()) throw usage_error("--grid: empty grid");
  std::vector<double> grid;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view token = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    grid.push_back(parse_real(token, "--grid"));
    if (grid.size() > max_grid_points) throw usage_error("--grid: at most 10000 points");
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return grid;
}

struct Options {
  std::string which;
  std::optional<std::string> a;
  std::optional<std::string> b;
  std::string format = "json";
  std::string rel_tol = "1e-12";
  std::string grid;
  std::string tol = "1e-8";
  std::string a_min;
  std::string a_max;
  std::string steps;
};

struct Emitted {
  io::OutputRecord record;
  std::string csv;
  int code = kOk;
  std::string diagnostic;
};

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// Parameters of eval/quad after validation.
struct Selection {
  std::string which;
  std::optional<double> a;
  std::optional<double> b;
};

inline Selection select(const Options& o) {
  Selection s{o.which, std::nullopt, std::nullopt};
  if (o.which == "a") {
    if (!o.a) throw usage_error("--which a requires --a");
    s.a = parse_real(*o.a, "--a");
  } else if (o.which == "c") {
    if (!o.a || !o.b) throw usage_error("--which c requires --a and --b");
    s.a = parse_real(*o.a, "--a");
    s.b = parse_real(*o.b, "--b");
    if (!(*s.a > 0.0) || !(*s.b > 0.0)) throw usage_error("--which c requires a > 0 and b > 0");
  }
  return s;
}

inline void put_selection(io::Json& params, const Selection& s) {
  params["which"] = s.which;
  if (s.a) params["a"] = io::json_number(*s.a);
  if (s.b) params["b"] = io::json_number(*s.b);
}

inline std::vector<std::string> selection_fields(const Selection& s) {
  return {s.which, s.a ? io::format_double(*s.a) : "", s.b ? io::format_double(*s.b) : ""};
}

inline Emitted run_eval(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  const Selection s = select(o);
  double value = 0.0;
  if (s.which == "a") {
    value = closedform::delta_closed(*s.a);
  } else if (s.which == "b") {
    value = closedform::vardi_b_constant();
  } else {
    value = closedform::malmsten_c(closedform::MalmstenParams(*s.a, *s.b));
  }
  Emitted e;
  e.record.command = "eval";
  put_selection(e.record.parameters, s);
  e.record.parameters["format"] = o.format;
  e.record.results["value"] = io::json_number(value);
  auto fields = selection_fields(s);
  fields.push_back(io::format_double(value));
  e.csv = io::csv_row({"which", "a", "b", "value"}) + io::csv_row(fields);
  e.record.timing_ms = elapsed_ms(start);
  return e;
}

inline Emitted run_quad(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  const Selection s = select(o);
  quad::ToleranceSpec spec;
  spec.rel_tol = parse_real(o.rel_tol, "--rel-tol");
  try {
    spec.validate();
  } catch (const std::invalid_argument& ex) {
    throw usage_error(std::string("--rel-tol: ") + ex.what());
  }
  quad::QuadratureResult q;
  double closed = 0.0;
  Emitted e;
  try {
    if (s.which == "a") {
      q = proofchain::integrate_delta(*s.a, spec);
      closed = closedform::delta_closed(*s.a);
    } else if (s.which == "b") {
      q = proofchain::integrate_b(spec);
      closed = closedform::vardi_b_constant();
    } else {
      const closedform::MalmstenParams params(*s.a, *s.b);
      q = proofchain::integrate_c(params, spec);
      closed = closedform::malmsten_c(params);
    }
  } catch (const quad::quadrature_error& ex) {
    q.value = std::nan("");
    q.converged = false;
    e.diagnostic = ex.what();
  }
  e.record.command = "quad";
  put_selection(e.record.parameters, s);
  e.record.parameters["rel_tol"] = io::json_number(spec.rel_tol);
  e.record.parameters["format"] = o.format;
  e.record.results = io::to_json(q);
  e.record.results["closed_form"] = io::json_number(closed);
  auto fields = selection_fields(s);
  for (const auto& f : {io::format_double(q.value), io::format_double(q.error_estimate),
                        std::to_string(q.evaluations), std::string(q.converged ? "true" : "false"),
                        std::to_string(q.levels), io::format_double(closed)}) {
    fields.push_back(f);
  }
  e.csv = io::csv_row({"which", "a", "b", "value", "error_estimate", "evaluations", "converged", "levels",
                       "closed_form"}) +
          io::csv_row(fields);
  if (!q.converged) {
    e.code = kNotConverged;
    if (e.diagnostic.empty()) e.diagnostic = "quadrature did not converge";
  }
  e.record.timing_ms = elapsed_ms(start);
  return e;
}

inline double parse_tolerance(const std::string& text) {
  const double tol = parse_real(text, "--tol");
  if (!(tol >= quad::ToleranceSpec::min_rel_tol)) throw usage_error("--tol: must be >= 1e-14");
  return tol;
}

inline Emitted run_verify(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> grid = parse_grid(o.grid);
  const double tol = parse_tolerance(o.tol);
  const proofchain::ChainReport report = proofchain::run_full_chain(grid, tol);
  Emitted e;
  e.record.command = "verify";
  io::Json g = io::Json::array();
  for (double a : grid) g.push_back(io::json_number(a));
  e.record.parameters["grid"] = std::move(g);
  e.record.parameters["tol"] = io::json_number(tol);
  e.record.parameters["format"] = o.format;
  e.record.results = io::to_json(report);
  e.csv = io::chain_csv(report);
  if (!report.overall_pass) {
    const auto failed = std::count_if(report.steps.begin(), report.steps.end(),
                                      [](const proofchain::IdentityReport& r) { return !r.pass; });
    e.code = kVerificationFailed;
    e.diagnostic = "verification failed: " + std::to_string(failed) + " step(s) did not pass";
  }
  e.record.timing_ms = elapsed_ms(start);
  return e;
}

inline Emitted run_table(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  const double lo = parse_real(o.a_min, "--a-min");
  const double hi = parse_real(o.a_max, "--a-max");
  const int steps = parse_int(o.steps, "--steps");
  if (!(lo < hi)) throw usage_error("table: need --a-min < --a-max");
  if (steps < 2 || steps > max_table_steps) throw usage_error("--steps: must lie in [2, 100000]");
  if (!std::isfinite(hi - lo)) throw usage_error("table: range too wide");

  Emitted e;
  e.record.command = "table";
  e.record.parameters["a_min"] = io::json_number(lo);
  e.record.parameters["a_max"] = io::json_number(hi);
  e.record.parameters["steps"] = steps;
  e.record.parameters["format"] = o.format;
  io::Json rows = io::Json::array();
  e.csv = io::csv_row({"a", "delta_closed", "delta_quadrature", "abs_err", "converged"});
  const double width = hi - lo;
  for (int i = 0; i < steps; ++i) {
    const double a = i + 1 == steps ? hi : lo + width * (static_cast<double>(i) / (steps - 1));
    const double closed = closedform::delta_closed(a);
    quad::QuadratureResult q;
    try {
      q = proofchain::integrate_delta(a);
    } catch (const quad::quadrature_error&) {
      q.value = std::nan("");
      q.converged = false;
    }
    const double abs_err = std::abs(q.value - closed);
    io::Json row = io::Json::object();
    row["a"] = io::json_number(a);
    row["delta_closed"] = io::json_number(closed);
    row["delta_quadrature"] = io::json_number(q.value);
    row["abs_err"] = io::json_number(abs_err);
    row["converged"] = q.converged;
    rows.push_back(std::move(row));
    e.csv += io::csv_row({io::format_double(a), io::format_double(closed), io::format_double(q.value),
                          io::format_double(abs_err), q.converged ? "true" : "false"});
  }
  e.record.results["rows"] = std::move(rows);
  e.record.timing_ms = elapsed_ms(start);
  return e;
}

inline void add_which_options(CLI::App* sub, Options& o) {
  sub->add_option("--which", o.which, "Integral: a (Delta(a)), b (ln x sech x), c (ln(ax) sech(bx))")
      ->required()
      ->check(CLI::IsMember({"a", "b", "c"}));
  sub->add_option("--a", o.a, "Parameter a");
  sub->add_option("--b", o.b, "Parameter b (which=c)");
}

inline void add_format_option(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace detail

/// Runs one CLI invocation.  `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  detail::Options o;
  CLI::App app{"Closed forms and numerical verification of logarithmic sech integrals", "malmsten"};
  app.require_subcommand(1);
  auto* eval = app.add_subcommand("eval", "Evaluate a closed form");
  detail::add_which_options(eval, o);
  detail::add_format_option(eval, o);
  auto* quadc = app.add_subcommand("quad", "Evaluate an integral by double-exponential quadrature");
  detail::add_which_options(quadc, o);
  quadc->add_option("--rel-tol", o.rel_tol, "Relative tolerance (>= 1e-14)");
  detail::add_format_option(quadc, o);
  auto* verify = app.add_subcommand("verify", "Verify the proof chain over a grid of a values");
  verify->add_option("--grid", o.grid, "Comma-separated a values")->required();
  verify->add_option("--tol", o.tol, "Verification tolerance (>= 1e-14)");
  detail::add_format_option(verify, o);
  auto* table = app.add_subcommand("table", "Tabulate Delta(a) closed form against quadrature");
  table->add_option("--a-min", o.a_min, "Smallest a")->required();
  table->add_option("--a-max", o.a_max, "Largest a")->required();
  table->add_option("--steps", o.steps, "Number of grid points (>= 2)")->required();
  detail::add_format_option(table, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kUsage;
  }

  detail::Emitted result;
  try {
    if (*eval) {
      result = detail::run_eval(o);
    } else if (*quadc) {
      result = detail::run_quad(o);
    } else if (*verify) {
      result = detail::run_verify(o);
    } else {
      result = detail::run_table(o);
    }
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (o.format == "csv") {
    out << result.csv;
  } else {
    out << io::serialize_json(result.record) << '\n';
  }
  if (!result.diagnostic.empty()) err << result.diagnostic << '\n';
  return result.code;
}

}  // namespace malmsten::cli

#endif  // MALMSTEN_CLI_APP_HPP
