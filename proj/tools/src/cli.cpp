#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdeform/errors.hpp"
#include "qdeform/exprparse.hpp"
#include "qdeform/l2q.hpp"
#include "qdeform/qcalculus.hpp"
#include "qdeform/qfunctions.hpp"
#include "qdeform/qschrodinger.hpp"
#include "qdeform/verification.hpp"

namespace qdeform::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double q = 0.9;
  double tol = kDefaultSeriesTol;
  double hbar = 1.0;
  double mass = 1.0;
  std::string lattice;
  std::string format = "csv";
  std::string output;

  CLI::Option* q_option = nullptr;
  CLI::Option* tol_option = nullptr;
};

void add_common(CLI::App* sub, RunConfig& c) {
  c.q_option = sub->add_option("--q", c.q, "Deformation parameter q > 0")
                   ->envname("QDEFORM_Q")
                   ->capture_default_str();
  c.tol_option = sub->add_option("--tol", c.tol, "Relative truncation tolerance of the q-series and q-sums")
                     ->envname("QDEFORM_TOL")
                     ->capture_default_str();
  sub->add_option("--hbar", c.hbar, "Reduced Planck constant")
      ->envname("QDEFORM_HBAR")
      ->capture_default_str();
  sub->add_option("--mass", c.mass, "Particle mass")->envname("QDEFORM_MASS")->capture_default_str();
  sub->add_option("--lattice", c.lattice,
                  "m_min:m_max[:a]; default spans |x| in [1.8e-3, 4.9] at the given q")
      ->envname("QDEFORM_LATTICE");
  sub->add_option("--format", c.format, "Output format")
      ->envname("QDEFORM_FORMAT")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--output", c.output, "Write to this file instead of standard output");
}

void validate(const RunConfig& c) {
  if (!std::isfinite(c.q) || c.q <= 0.0) throw UsageError("--q must be finite and positive");
  if (!std::isfinite(c.tol) || c.tol <= 0.0 || c.tol >= 1.0) {
    throw UsageError("--tol must lie in (0, 1)");
  }
  if (!std::isfinite(c.hbar) || c.hbar <= 0.0) throw UsageError("--hbar must be positive");
  if (!std::isfinite(c.mass) || c.mass <= 0.0) throw UsageError("--mass must be positive");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + ": '" + s + "' is not a finite number");
  }
}

int to_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + ": '" + s + "' is not an integer");
  }
}

LatticePtr make_lattice(const RunConfig& c) {
  const QParam q(c.q);
  if (q.classical()) {
    throw UsageError("this command needs a q-lattice, which does not exist at q = 1");
  }
  if (c.lattice.empty()) return default_lattice(q);
  const auto parts = split(c.lattice, ':');
  if (parts.size() != 2 && parts.size() != 3) {
    throw UsageError("--lattice expects m_min:m_max or m_min:m_max:a");
  }
  const int m_min = to_int(parts[0], "--lattice m_min");
  const int m_max = to_int(parts[1], "--lattice m_max");
  const double a = parts.size() == 3 ? to_double(parts[2], "--lattice a") : 1.0;
  if (m_min >= m_max) throw UsageError("--lattice needs m_min < m_max");
  if (!(a > 0.0)) throw UsageError("--lattice scale a must be positive");
  try {
    return build_lattice(q, m_min, m_max, a);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

Expression parse_or_usage(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " must not be empty");
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw UsageError(std::string(flag) + " \"" + text + "\": " + e.what());
  }
}

std::vector<double> points_from(const std::vector<double>& points, const std::string& range) {
  if (!points.empty() && !range.empty()) throw UsageError("give either --points or --range");
  if (!points.empty()) return points;
  if (range.empty()) throw UsageError("one of --points or --range is required");
  const auto parts = split(range, ':');
  if (parts.size() != 3) throw UsageError("--range expects start:stop:step");
  const double a = to_double(parts[0], "--range start");
  const double b = to_double(parts[1], "--range stop");
  const double h = to_double(parts[2], "--range step");
  if (!(h > 0.0) || b < a) throw UsageError("--range needs start <= stop and step > 0");
  const auto n = static_cast<long long>(std::floor((b - a) / h + 1e-9)) + 1;
  if (n > 10'000'000) throw UsageError("--range produces too many points");
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) xs.push_back(a + static_cast<double>(i) * h);
  return xs;
}

// ---------------------------------------------------------------- output

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string command;
  json parameters = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Signed zeros print as 0 so that outputs do not depend on rounding direction.
double unsigned_zero(double v) { return v == 0.0 ? 0.0 : v; }

std::string fmt17(double v) {
  v = unsigned_zero(v);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return fmt17(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return unsigned_zero(*d);
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

std::string render(const Table& t, const std::string& format) {
  std::ostringstream out;
  if (format == "json") {
    json rows = json::array();
    for (const auto& r : t.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = json_cell(r[i]);
      rows.push_back(std::move(obj));
    }
    const json doc = {{"schema_version", kSchemaVersion},
                      {"command", t.command},
                      {"parameters", t.parameters},
                      {"columns", t.columns},
                      {"rows", std::move(rows)}};
    out << doc.dump(2) << '\n';
    return out.str();
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
    out << '\n';
  }
  return out.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
  } else {
    write_file(c.output, text);
  }
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir + ": " + ec.message());
  return dir;
}

std::string lattice_function_text(const LatticeFunction& psi, const std::string& format) {
  if (format == "json") return to_json(psi);
  std::ostringstream s;
  write_csv(psi, s);
  return s.str();
}

std::string numbered(const char* stem, std::size_t n, const std::string& format) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.%s", stem, n, format.c_str());
  return buf;
}

json common_parameters(const RunConfig& c) {
  return {{"q", c.q}, {"tol", c.tol}};
}

json lattice_parameters(const QLattice& l) {
  return {{"m_min", l.m_min()}, {"m_max", l.m_max()}, {"a", l.scale()}};
}

// -------------------------------------------------------------- commands

struct EvalArgs {
  std::string fn;
  std::vector<double> points;
  std::string range;
};

void cmd_eval(const RunConfig& c, const EvalArgs& a, std::ostream& out) {
  const QParam q(c.q);
  const std::vector<double> xs = points_from(a.points, a.range);
  Table t{"eval", common_parameters(c), {"x", "re", "im", "terms_used"}, {}};
  t.parameters["fn"] = a.fn;
  for (const double x : xs) {
    const QSpecialValue v = a.fn == "Eq"   ? q_exp(x, q, c.tol)
                            : a.fn == "Sq" ? q_sin(x, q, c.tol)
                                           : q_cos(x, q, c.tol);
    t.rows.push_back({x, v.value.real(), v.value.imag(), static_cast<long long>(v.terms_used)});
  }
  emit(c, render(t, c.format), out);
}

struct DerivArgs {
  std::string expr;
  std::vector<double> points;
  std::string range;
};

void cmd_qderiv(const RunConfig& c, const DerivArgs& a, std::ostream& out) {
  const QParam q(c.q);
  const Expression e = parse_or_usage(a.expr, "--expr");
  const std::vector<double> xs = points_from(a.points, a.range);
  const Evaluable f = to_evaluable(e, q, c.tol);
  Table t{"qderiv", common_parameters(c), {"x", "re", "im"}, {}};
  t.parameters["expr"] = to_string(e);
  for (const double x : xs) {
    const Complex d = jackson_derivative(f, x, q);
    t.rows.push_back({x, d.real(), d.imag()});
  }
  emit(c, render(t, c.format), out);
}

struct IntArgs {
  std::string expr;
  double upper = 1.0;
  std::string domain = "finite";
};

void cmd_qint(const RunConfig& c, const IntArgs& a, std::ostream& out) {
  const QParam q(c.q);
  const Expression e = parse_or_usage(a.expr, "--expr");
  if (a.domain == "finite" && !(a.upper > 0.0 && std::isfinite(a.upper))) {
    throw UsageError("--upper must be finite and positive");
  }
  const Evaluable f = to_evaluable(e, q, c.tol);
  const SumControl control{c.tol, SumControl{}.max_terms};
  Complex value;
  if (a.domain == "finite") {
    value = q_integral_finite(f, a.upper, q, control);
  } else if (a.domain == "halfline") {
    value = q_integral_halfline(f, q, control);
  } else {
    value = q_integral_fullline(f, q, control);
  }
  Table t{"qint", common_parameters(c), {"domain", "upper", "re", "im"}, {}};
  t.parameters["expr"] = to_string(e);
  const Cell upper = a.domain == "finite" ? Cell(a.upper) : Cell(std::string("inf"));
  t.rows.push_back({a.domain, upper, value.real(), value.imag()});
  emit(c, render(t, c.format), out);
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  VerifyConfig vc;
  if (c.q_option->count() > 0) vc.q_values = {c.q};
  if (c.tol_option->count() > 0) vc.contract_override = c.tol;
  const VerifyReport report = run_identity_suite(vc);
  Table t{"verify", json::object(),
          {"identity", "statement", "max_residual", "contract", "status", "checks"}, {}};
  t.parameters["q_values"] = vc.q_values;
  if (vc.contract_override) t.parameters["contract_override"] = *vc.contract_override;
  for (const auto& e : report.entries) {
    t.rows.push_back({e.identity, e.statement, e.max_residual, e.contract,
                      std::string(to_string(e.status)), static_cast<long long>(e.checks)});
  }
  emit(c, render(t, c.format), out);
  if (report.all_passed()) return kExitOk;
  const auto failed = report.failures();
  err << "verify: " << failed.size() << " identities failed:";
  for (const auto& f : failed) err << ' ' << f;
  err << '\n';
  return kExitComputation;
}

struct SolveArgs {
  std::string potential = "0";
  int k = 5;
  std::string out_dir;
};

void cmd_solve(const RunConfig& c, const SolveArgs& a, std::ostream& out) {
  const Expression v = parse_or_usage(a.potential, "--potential");
  if (a.k < 0) throw UsageError("--k must be nonnegative");
  const LatticePtr lattice = make_lattice(c);
  const Hamiltonian h =
      build_hamiltonian(to_evaluable(v, QParam(c.q), c.tol), c.mass, c.hbar, lattice, to_string(v));
  if (a.k > h.odd_chain().size()) {
    throw UsageError("--k exceeds the " + std::to_string(h.odd_chain().size()) +
                     " odd lattice points");
  }
  const SpectrumResult s = stationary_states(h, a.k);
  const std::string spectrum = spectrum_to_json(s, h);
  if (a.out_dir.empty()) {
    emit(c, spectrum, out);
    return;
  }
  const fs::path dir = prepare_dir(a.out_dir);
  write_file(dir / "spectrum.json", spectrum);
  for (std::size_t n = 0; n < s.size(); ++n) {
    write_file(dir / numbered("eigenfunction", n, c.format),
               lattice_function_text(s.eigenfunctions[n], c.format));
  }
}

struct EvolveArgs {
  std::string potential = "0";
  std::string psi0;
  double t = 1.0;
  double dt = 0.01;
  int every = 0;
  std::string out_dir;
};

void cmd_evolve(const RunConfig& c, const EvolveArgs& a, std::ostream& out) {
  const Expression v = parse_or_usage(a.potential, "--potential");
  const Expression psi_expr = parse_or_usage(a.psi0, "--psi0");
  if (!(a.dt > 0.0) || !std::isfinite(a.dt)) throw UsageError("--dt must be positive");
  if (!(a.t >= 0.0) || !std::isfinite(a.t)) throw UsageError("--t must be nonnegative");
  if (a.every < 0) throw UsageError("--every must be nonnegative");
  const auto steps = static_cast<long long>(std::llround(a.t / a.dt));
  if (steps > 10'000'000) throw UsageError("--t / --dt gives too many steps");

  const QParam q(c.q);
  const LatticePtr lattice = make_lattice(c);
  const Hamiltonian h = build_hamiltonian(to_evaluable(v, q, c.tol), c.mass, c.hbar, lattice,
                                          to_string(v));
  LatticeFunction psi0 = sample(to_evaluable(psi_expr, q, c.tol), lattice);
  const double n0 = norm(psi0);
  if (!(n0 > 0.0)) throw Error("--psi0 has zero q-norm on the lattice");
  psi0.samples /= n0;
  psi0.value_at_zero /= n0;

  const Propagator propagator(h);
  Table series{"evolve", common_parameters(c), {"step", "t", "norm", "energy"}, {}};
  series.parameters["potential"] = to_string(v);
  series.parameters["psi0"] = to_string(psi_expr);
  series.parameters["dt"] = a.dt;
  series.parameters["hbar"] = c.hbar;
  series.parameters["mass"] = c.mass;
  series.parameters["lattice"] = lattice_parameters(*lattice);

  std::optional<fs::path> dir;
  if (!a.out_dir.empty()) dir = prepare_dir(a.out_dir);

  for (long long s = 0; s <= steps; ++s) {
    const double time = static_cast<double>(s) * a.dt;
    const WaveState state = evolve({psi0, 0.0}, propagator, a.dt, static_cast<int>(s));
    series.rows.push_back({s, time, norm(state.psi), inner_product(state.psi, h.apply(state.psi)).real()});
    const bool snapshot = s == 0 || s == steps || (a.every > 0 && s % a.every == 0);
    if (dir && snapshot) {
      write_file(*dir / numbered("psi", static_cast<std::size_t>(s), c.format),
                 lattice_function_text(state.psi, c.format));
    }
  }
  const std::string text = render(series, c.format);
  if (dir) {
    write_file(*dir / ("series." + c.format), text);
  } else {
    emit(c, text, out);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"q-deformed calculus and quantum mechanics toolkit", "qdeform"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qdeform 0.1.0");

  RunConfig eval_cfg, deriv_cfg, int_cfg, verify_cfg, solve_cfg, evolve_cfg;
  EvalArgs eval_args;
  DerivArgs deriv_args;
  IntArgs int_args;
  SolveArgs solve_args;
  EvolveArgs evolve_args;

  auto* eval = app.add_subcommand("eval", "Evaluate E_q, S_q or C_q");
  add_common(eval, eval_cfg);
  eval->add_option("--fn", eval_args.fn, "Function")->required()->check(CLI::IsMember({"Eq", "Sq", "Cq"}));
  eval->add_option("--points", eval_args.points, "Comma-separated points")->delimiter(',');
  eval->add_option("--range", eval_args.range, "start:stop:step");

  auto* qderiv = app.add_subcommand("qderiv", "Jackson derivative of an expression");
  add_common(qderiv, deriv_cfg);
  qderiv->add_option("--expr", deriv_args.expr, "Expression in x")->required();
  qderiv->add_option("--points", deriv_args.points, "Comma-separated points")->delimiter(',');
  qderiv->add_option("--range", deriv_args.range, "start:stop:step");

  auto* qint = app.add_subcommand("qint", "Jackson q-integral of an expression");
  add_common(qint, int_cfg);
  qint->add_option("--expr", int_args.expr, "Expression in x")->required();
  qint->add_option("--upper", int_args.upper, "Upper limit of the finite integral")->capture_default_str();
  qint->add_option("--domain", int_args.domain, "finite: [0, upper]; halfline: [0, inf); fullline")
      ->check(CLI::IsMember({"finite", "halfline", "fullline"}))
      ->capture_default_str();

  auto* verify = app.add_subcommand(
      "verify", "Run the identity suite; --q restricts the sweep, --tol overrides every contract");
  add_common(verify, verify_cfg);

  auto* solve = app.add_subcommand("solve", "Stationary states of H = -hbar^2/2m D^2 + V");
  add_common(solve, solve_cfg);
  solve->add_option("--potential", solve_args.potential, "V(x)")->capture_default_str();
  solve->add_option("--k", solve_args.k, "Number of eigenpairs")->capture_default_str();
  solve->add_option("--out-dir", solve_args.out_dir,
                    "Write spectrum.json and eigenfunction files here");

  auto* evolve = app.add_subcommand("evolve", "Spectral time evolution of a wave packet");
  add_common(evolve, evolve_cfg);
  evolve->add_option("--potential", evolve_args.potential, "V(x)")->capture_default_str();
  evolve->add_option("--psi0", evolve_args.psi0, "Initial state; normalized on the lattice")->required();
  evolve->add_option("--t", evolve_args.t, "Total time")->capture_default_str();
  evolve->add_option("--dt", evolve_args.dt, "Time step")->capture_default_str();
  evolve->add_option("--every", evolve_args.every,
                     "Snapshot every this many steps (0: first and last only)")
      ->capture_default_str();
  evolve->add_option("--out-dir", evolve_args.out_dir, "Write snapshots and series here");

  std::vector<std::string> argv_store{"qdeform"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (eval->parsed()) {
      validate(eval_cfg);
      cmd_eval(eval_cfg, eval_args, out);
    } else if (qderiv->parsed()) {
      validate(deriv_cfg);
      cmd_qderiv(deriv_cfg, deriv_args, out);
    } else if (qint->parsed()) {
      validate(int_cfg);
      cmd_qint(int_cfg, int_args, out);
    } else if (verify->parsed()) {
      validate(verify_cfg);
      return cmd_verify(verify_cfg, out, err);
    } else if (solve->parsed()) {
      validate(solve_cfg);
      cmd_solve(solve_cfg, solve_args, out);
    } else if (evolve->parsed()) {
      validate(evolve_cfg);
      cmd_evolve(evolve_cfg, evolve_args, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitOk;
}

}  // namespace qdeform::cli
