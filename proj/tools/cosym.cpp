#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cosym/almost_contact.hpp"
#include "cosym/dynamics.hpp"
#include "cosym/error.hpp"
#include "cosym/invariants.hpp"
#include "cosym/jacobi_flows.hpp"
#include "cosym/manifolds.hpp"
#include "cosym/serialization.hpp"

using nlohmann::json;
using namespace cosym;

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kInput = 2;

// input errors that are not library exceptions
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct RunConfig
{
  std::string structure{"xjt_gtacos"};
  std::string hamiltonian;
  Parameters parameters;
  std::vector<double> point;
  double t_end{1.0};
  double dt{0.01};
  std::string method{"rk45"};
  std::string csv;
  std::string json_out;
  double k{1.0}, nu{1.0}, delta{1.0};
  std::string parameterization{"balanced"};
  LinearHamiltonianCoefficients coeffs;
  std::vector<std::string> variants{"base_xj1", "gtacos"};
  std::vector<double> free{1.0, 0.5, 0.3, -0.2};
  std::string f, g;
  std::string emit;
  bool paper_verbatim{false};
  bool coeffs_given{false};
  std::uint64_t seed{42};
};

std::vector<double> to_std(const Eigen::VectorXd & v) { return {v.data(), v.data() + v.size()}; }

json matrix_json(const Eigen::MatrixXd & M)
{
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) rows.push_back(to_std(M.row(i).transpose()));
  return rows;
}

ModelParameters model(const RunConfig & c)
{
  ModelParameters m = ModelParameters::from_kn(
      c.k, c.nu, c.delta, c.parameterization == "sqrt" ? Parameterization::sqrt : Parameterization::balanced);
  m.validate();
  return m;
}

StructureSpec load_structure(const RunConfig & c)
{
  const std::filesystem::path p(c.structure);
  if (p.extension() == ".json" || std::filesystem::exists(p)) {
    std::ifstream in(p);
    if (!in) throw UsageError("cannot open structure file " + c.structure);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception & e) {
      throw UsageError(c.structure + ": " + e.what());
    }
    return structure_from_json(doc);
  }
  return builtin(c.structure, model(c));
}

ChartPoint make_point(const ChartRef & chart, const std::vector<double> & v)
{
  if (static_cast<int>(v.size()) != chart->dimension())
    throw UsageError("point has " + std::to_string(v.size()) + " values; chart '" + chart->name() + "' needs " +
                     std::to_string(chart->dimension()));
  return {chart, Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()))};
}

ScalarField parse_field(const ChartRef & chart, const std::string & text, const Parameters & par)
{
  if (text.empty()) throw UsageError("missing expression");
  try {
    return ScalarField::parse(chart, text, par);
  } catch (const ParseError & e) {
    std::cerr << "  " << text << "\n  " << std::string(e.offset(), ' ') << "^\n";
    throw;
  }
}

Parameters merged(const StructureSpec & s, const RunConfig & c)
{
  Parameters p = s.parameters();
  for (const auto & [k, v] : c.parameters) p[k] = v;
  return p;
}

Method method_of(const RunConfig & c)
{
  if (c.method == "rk4") return Method::rk4;
  if (c.method == "rk45") return Method::rk45;
  throw UsageError("method must be rk4 or rk45");
}

void write_outputs(const RunConfig & c, const Trajectory & t, const std::string & structure, const Parameters & params,
                   const IntegrationOptions & opt)
{
  if (!c.csv.empty()) {
    std::ofstream out(c.csv);
    if (!out) throw UsageError("cannot write " + c.csv);
    write_trajectory_csv(out, t);
  }
  if (!c.json_out.empty()) {
    std::ofstream out(c.json_out);
    if (!out) throw UsageError("cannot write " + c.json_out);
    json doc = trajectory_to_json(t);
    doc["run"] = {{"structure", structure}, {"parameters", params},     {"method", c.method},
                  {"t_end", c.t_end},       {"dt", c.dt},               {"abs_tol", opt.abs_tol},
                  {"rel_tol", opt.rel_tol}, {"hamiltonian", c.hamiltonian}};
    out << doc.dump(2) << '\n';
  }
}

json summary(const Trajectory & t)
{
  double max_res = 0.0, drift = 0.0, min_y = INFINITY;
  for (double r : t.dissipation_residuals)
    if (std::isfinite(r)) max_res = std::max(max_res, r);
  for (double h : t.hamiltonian_values) drift = std::max(drift, std::abs(h - t.hamiltonian_values.front()));
  const auto y = t.states.empty() ? std::nullopt : t.states.front().chart()->find("y");
  json s{{"samples", t.times.size()},
         {"t_final", t.times.empty() ? 0.0 : t.times.back()},
         {"complete", t.complete},
         {"max_dissipation_residual", max_res},
         {"energy_drift", drift}};
  if (y) {
    for (const auto & p : t.states) min_y = std::min(min_y, p[*y]);
    s["min_y"] = min_y;
  }
  if (!t.complete) s["diagnostic"] = t.diagnostic;
  return s;
}

// ------------------------------------------------------------------ commands

int cmd_list(const RunConfig & c)
{
  if (!c.emit.empty()) {
    RunConfig cc = c;
    cc.structure = c.emit;
    const json doc = structure_to_json(load_structure(cc));
    if (c.json_out.empty()) {
      std::cout << doc.dump(2) << '\n';
    } else {
      std::ofstream(c.json_out) << doc.dump(2) << '\n';
    }
    return kOk;
  }
  for (const auto & e : builtin_catalog()) std::cout << e.name << "  " << e.description << '\n';
  return kOk;
}

int cmd_check(const RunConfig & c)
{
  const StructureSpec s = load_structure(c);
  const auto probes = probe_points(s.chart(), 64);
  const StructureClass cls = classify(s, probes);
  const ChartPoint & p = probes.front();
  json out{{"structure", s.name()},
           {"chart", s.chart()->name()},
           {"coordinates", s.chart()->coordinates()},
           {"acos", cls.acos},
           {"gtacos", cls.gtacos},
           {"cos", cls.cos},
           {"contact", cls.contact},
           {"tacs", cls.tacs},
           {"probe_point", to_std(p.values())},
           {"volume", s.volume(p)}};
  if (cls.tacs_epsilon) out["tacs_epsilon"] = *cls.tacs_epsilon;
  if (cls.acos) out["reeb"] = to_std(reeb(s, p));
  std::cout << out.dump(2) << '\n';
  return cls.acos ? kOk : kNumerical;
}

int cmd_reeb(const RunConfig & c)
{
  const StructureSpec s = load_structure(c);
  const ChartPoint p = make_point(s.chart(), c.point);
  std::cout << json{{"structure", s.name()}, {"point", c.point}, {"reeb", to_std(reeb(s, p))}}.dump(2) << '\n';
  return kOk;
}

int cmd_field(const RunConfig & c)
{
  const StructureSpec s = load_structure(c);
  const ChartPoint p = make_point(s.chart(), c.point);
  const ScalarField H = parse_field(s.chart(), c.hamiltonian, merged(s, c));
  json out{{"structure", s.name()},
           {"hamiltonian", H.to_string()},
           {"point", c.point},
           {"H", H(p)},
           {"X_H", to_std(hamiltonian_field_generic(s, H, p))},
           {"grad_H", to_std(gradient_field(s, H, p))},
           {"reeb_derivative", reeb_derivative(s, H, p)}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int cmd_bracket(const RunConfig & c)
{
  const StructureSpec s = load_structure(c);
  const ChartPoint p = make_point(s.chart(), c.point);
  const Parameters par = merged(s, c);
  const ScalarField f = parse_field(s.chart(), c.f, par), g = parse_field(s.chart(), c.g, par);
  json out{{"structure", s.name()}, {"point", c.point}};
  out["jacobi_sharp"] = jacobi_bracket_sharp(s, f, g, p);
  try {
    out["poisson"] = poisson_bracket(f, g, p);
    out["jacobi"] = jacobi_bracket(f, g, p);
  } catch (const ChartMismatch &) {
    out["note"] = "Poisson and Jacobi brackets need Darboux coordinate names";
  }
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int cmd_integrate(const RunConfig & c)
{
  const StructureSpec s = load_structure(c);
  const ChartPoint p = make_point(s.chart(), c.point);
  const ScalarField H = parse_field(s.chart(), c.hamiltonian, merged(s, c));
  IntegrationOptions opt;
  opt.method = method_of(c);
  const Trajectory t = integrate(s, H, p, c.t_end, c.dt, opt);
  write_outputs(c, t, s.name(), merged(s, c), opt);
  std::cout << summary(t).dump(2) << '\n';
  return t.complete ? kOk : kNumerical;
}

int cmd_compare(const RunConfig & c)
{
  if (c.variants.empty()) throw UsageError("compare needs at least one variant");
  const ModelParameters m = model(c);
  std::vector<FlowVariant> vs;
  for (const auto & v : c.variants) vs.push_back(parse_variant(v));
  if (c.point.size() != 5) throw UsageError("compare expects a point (x,y,q,p,kappa)");
  IntegrationOptions opt;
  opt.method = method_of(c);

  std::vector<Trajectory> runs;
  for (FlowVariant v : vs) {
    const std::vector<double> x0(c.point.begin(), c.point.begin() + (v == FlowVariant::base_xj1 ? 4 : 5));
    runs.push_back(integrate_variant(c.coeffs, v, m, make_point(variant_chart(v), x0), c.t_end, c.dt, opt));
  }
  std::size_t rows = runs.front().times.size();
  for (const auto & r : runs) rows = std::min(rows, r.times.size());
  const int shared = std::any_of(vs.begin(), vs.end(), [](FlowVariant v) { return v == FlowVariant::base_xj1; }) ? 4 : 5;
  const auto & names = extended_siegel_jacobi_chart()->coordinates();

  json deltas = json::object();
  std::ostringstream csv;
  csv << 't';
  for (std::size_t j = 1; j < vs.size(); ++j)
    for (int i = 0; i < shared; ++i) csv << ",d_" << to_string(vs[j]) << '_' << names[static_cast<std::size_t>(i)];
  csv << '\n';
  std::vector<Eigen::VectorXd> worst(vs.size(), Eigen::VectorXd::Zero(shared));
  for (std::size_t k = 0; k < rows; ++k) {
    csv << format_double(runs.front().times[k]);
    for (std::size_t j = 1; j < vs.size(); ++j) {
      const Eigen::VectorXd d = runs[j].states[k].values().head(shared) - runs[0].states[k].values().head(shared);
      worst[j] = worst[j].cwiseMax(d.cwiseAbs());
      for (int i = 0; i < shared; ++i) csv << ',' << format_double(d[i]);
    }
    csv << '\n';
  }
  for (std::size_t j = 1; j < vs.size(); ++j)
    deltas[std::string(to_string(vs[j])) + "-" + std::string(to_string(vs[0]))] = to_std(worst[j]);

  json red_green = json::object();
  const ChartPoint p5 = make_point(extended_siegel_jacobi_chart(), c.point);
  for (FlowVariant v : vs) {
    if (v == FlowVariant::base_xj1) continue;
    const RedGreen rg = red_green_decomposition(c.coeffs, v, m, p5);
    json active = json::array();
    for (int i = 0; i < 5; ++i)
      if (std::abs(rg.correction[i]) > 1e-12) active.push_back(names[static_cast<std::size_t>(i)]);
    red_green[std::string(to_string(v))] = {
        {"base", to_std(rg.base)}, {"correction", to_std(rg.correction)}, {"active", active}};
  }
  if (!c.csv.empty()) {
    std::ofstream out(c.csv);
    if (!out) throw UsageError("cannot write " + c.csv);
    out << csv.str();
  }
  bool complete = true;
  json status = json::object();
  for (std::size_t j = 0; j < vs.size(); ++j) {
    complete = complete && runs[j].complete;
    status[std::string(to_string(vs[j]))] = summary(runs[j]);
  }
  std::cout << json{{"rows", rows}, {"max_abs_delta", deltas}, {"red_green", red_green}, {"runs", status}}.dump(2)
            << '\n';
  return complete ? kOk : kNumerical;
}

int cmd_riccati(const RunConfig & c)
{
  const ModelParameters m = model(c);
  if (c.paper_verbatim) {
    std::vector<double> pt = c.point;
    if (pt.empty()) pt = {0.3, 1.2, 0.4, -0.5, 0.1};
    const ChartPoint p = make_point(extended_siegel_jacobi_chart(), pt);
    json rows = json::array();
    const auto coeffs = c.coeffs_given ? c.coeffs : LinearHamiltonianCoefficients::reference();
    for (const auto & d : paper_verbatim_report(coeffs, m, p))
      rows.push_back({{"name", d.name},
                      {"components", d.components},
                      {"printed", to_std(d.printed)},
                      {"derived", to_std(d.derived)},
                      {"max_abs_deviation", d.max_abs_deviation}});
    const json used{{"a", coeffs.a}, {"b", coeffs.b}, {"c", coeffs.c_lin}, {"m", coeffs.m}, {"n", coeffs.n_lin},
                    {"h_kappa", coeffs.h_kappa}};
    std::cout << json{{"point", pt}, {"coefficients", used}, {"discrepancies", rows}}.dump(2) << '\n';
    return kOk;
  }
  if (c.point.size() != 2) throw UsageError("riccati expects --point x,y");
  IntegrationOptions opt;
  opt.method = method_of(c);
  const Trajectory t = integrate_riccati(c.coeffs, m, c.point[0], c.point[1], c.t_end, c.dt, opt);
  write_outputs(c, t, "riccati", c.coeffs.table(m), opt);
  std::cout << summary(t).dump(2) << '\n';
  return t.complete ? kOk : kNumerical;
}

int cmd_phi(const RunConfig & c)
{
  const ModelParameters m = model(c);
  if (c.free.size() != 4) throw UsageError("--free expects four values Φ_yq,Φ_yp,Φ_qp,Φ_pq");
  std::vector<double> pt = c.point;
  if (pt.empty()) pt = {0.0, 1.0, 0.1, 0.2, 0.0};
  const ChartPoint p = make_point(extended_siegel_jacobi_chart(), pt);
  const AcmsSolution s = solve_phi({c.free[0], c.free[1], c.free[2], c.free[3]}, m, p);
  json res = json::object();
  for (const auto & r : s.residuals) res[r.name] = r.value;
  json out{{"point", pt},
           {"phi", matrix_json(s.phi.entries)},
           {"xi", to_std(s.xi)},
           {"eta", to_std(s.eta)},
           {"g_prime", matrix_json(s.g_prime)},
           {"g_prime_printed_deviation", (g_prime_printed(s.phi, m, p) - s.g_prime).cwiseAbs().maxCoeff()},
           {"residuals", res},
           {"rank", s.rank},
           {"g_eigenvalues", to_std(s.g_eigenvalues)},
           {"positive_definite", s.positive_definite},
           {"multistart", {{"starts", s.starts}, {"converged", s.converged}}},
           {"potential_fit_residual", potential_fit_residual(s)},
           {"invariant_metric_witness", ppp_negative_witness(m, p)}};
  std::cout << out.dump(2) << '\n';
  return s.max_residual() <= 1e-10 && s.rank == 4 ? kOk : kNumerical;
}

int cmd_suite(const RunConfig & c)
{
  bool ok = true;
  for (const auto & r : run_invariant_suite(c.seed, model(c))) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.structure << ' ' << r.property << " value=" << format_double(r.value)
              << " tol=" << format_double(r.tolerance) << '\n';
    ok = ok && r.passed;
  }
  return ok ? kOk : kNumerical;
}

// --------------------------------------------------------------- config file

template <typename T>
void take(const json & doc, const char * key, T & target, const CLI::App & app, const char * flag)
{
  if (doc.contains(key) && app.count(flag) == 0) target = doc.at(key).get<T>();
}

void apply_config(const std::string & path, RunConfig & c, const CLI::App & sub)
{
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
    take(doc, "structure", c.structure, sub, "--structure");
    take(doc, "hamiltonian", c.hamiltonian, sub, "--hamiltonian");
    take(doc, "initial_point", c.point, sub, "--point");
    take(doc, "t_end", c.t_end, sub, "--t-end");
    take(doc, "dt", c.dt, sub, "--dt");
    take(doc, "method", c.method, sub, "--method");
    take(doc, "variants", c.variants, sub, "--variants");
    take(doc, "free", c.free, sub, "--free");
    if (doc.contains("parameters")) {
      for (const auto & [k, v] : doc["parameters"].items()) {
        if (k == "k" && sub.count("--k") == 0) c.k = v.get<double>();
        else if (k == "nu" && sub.count("--nu") == 0) c.nu = v.get<double>();
        else if (k == "delta" && sub.count("--delta") == 0) c.delta = v.get<double>();
        else c.parameters[k] = v.get<double>();
      }
    }
    if (doc.contains("outputs")) {
      take(doc["outputs"], "csv", c.csv, sub, "--csv");
      take(doc["outputs"], "json", c.json_out, sub, "--json");
    }
    if (doc.contains("coefficients")) {
      c.coeffs_given = true;
      const json & k = doc["coefficients"];
      take(k, "a", c.coeffs.a, sub, "--a");
      take(k, "b", c.coeffs.b, sub, "--b");
      take(k, "c", c.coeffs.c_lin, sub, "--c");
      take(k, "m", c.coeffs.m, sub, "--m");
      take(k, "n", c.coeffs.n_lin, sub, "--n");
      take(k, "h_kappa", c.coeffs.h_kappa, sub, "--h-kappa");
    }
  } catch (const json::exception & e) {
    throw UsageError(path + ": " + e.what());
  }
}

void validate(const RunConfig & c, const std::string & cmd)
{
  if (cmd == "integrate" || cmd == "compare" || (cmd == "riccati" && !c.paper_verbatim)) {
    if (!(c.dt > 0.0)) throw UsageError("dt must be positive");
    if (c.t_end < 0.0) throw UsageError("t_end must be nonnegative");
  }
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"cosym: almost cosymplectic and contact Hamiltonian dynamics"};
  app.require_subcommand(1);
  RunConfig c;
  if (const char * env = std::getenv("COSYM_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception &) {
      std::cerr << "error: COSYM_SEED must be an unsigned integer\n";
      return kInput;
    }
  }
  std::string config;
  app.add_option("--seed", c.seed, "seed for randomized checks (default 42, env COSYM_SEED)");

  auto model_flags = [&](CLI::App * s) {
    s->add_option("--k", c.k, "k > 0");
    s->add_option("--nu", c.nu, "nu > 0");
    s->add_option("--delta", c.delta, "delta > 0");
    s->add_option("--parameterization", c.parameterization, "balanced | sqrt")
        ->check(CLI::IsMember({"balanced", "sqrt"}));
    s->add_option("--config", config, "JSON run configuration");
  };
  auto structure_flags = [&](CLI::App * s) {
    s->add_option("--structure,--builtin", c.structure, "built-in name or structure JSON path");
    s->add_option("--point", c.point, "comma-separated coordinates")->delimiter(',');
    s->add_option("--param", c.parameters, "extra parameter name=value");
  };
  auto run_flags = [&](CLI::App * s) {
    s->add_option("--t-end", c.t_end, "final time");
    s->add_option("--dt", c.dt, "output spacing");
    s->add_option("--method", c.method, "rk4 | rk45");
    s->add_option("--csv", c.csv, "trajectory CSV path");
    s->add_option("--json", c.json_out, "trajectory JSON path");
  };
  auto coeff_flags = [&](CLI::App * s) {
    s->add_option("--a", c.coeffs.a);
    s->add_option("--b", c.coeffs.b);
    s->add_option("--c", c.coeffs.c_lin);
    s->add_option("--m", c.coeffs.m);
    s->add_option("--n", c.coeffs.n_lin);
    s->add_option("--h-kappa", c.coeffs.h_kappa, "h(kappa) expression");
  };

  auto * list = app.add_subcommand("list-manifolds", "list built-in structures");
  list->add_option("--emit", c.emit, "write the named structure as JSON");
  list->add_option("--out", c.json_out, "output path for --emit");
  model_flags(list);

  auto * check = app.add_subcommand("check-structure", "classify a structure");
  model_flags(check);
  structure_flags(check);

  auto * reeb_cmd = app.add_subcommand("reeb", "Reeb vector at a point");
  model_flags(reeb_cmd);
  structure_flags(reeb_cmd);

  auto * field = app.add_subcommand("field", "X_H and grad H at a point");
  model_flags(field);
  structure_flags(field);
  field->add_option("--hamiltonian,-H", c.hamiltonian, "H expression");

  auto * bracket = app.add_subcommand("bracket", "Poisson and Jacobi brackets at a point");
  model_flags(bracket);
  structure_flags(bracket);
  bracket->add_option("--f", c.f, "first function");
  bracket->add_option("--g", c.g, "second function");

  auto * integ = app.add_subcommand("integrate", "integrate X_H");
  model_flags(integ);
  structure_flags(integ);
  run_flags(integ);
  integ->add_option("--hamiltonian,-H", c.hamiltonian, "H expression");

  auto * compare = app.add_subcommand("compare", "compare flow variants of a linear Hamiltonian");
  model_flags(compare);
  run_flags(compare);
  coeff_flags(compare);
  compare->add_option("--point", c.point, "x,y,q,p,kappa")->delimiter(',');
  compare->add_option("--variants", c.variants, "base_xj1,gtacos,contact")->delimiter(',');

  auto * ric = app.add_subcommand("riccati", "Riccati flow in (x, y)");
  model_flags(ric);
  run_flags(ric);
  coeff_flags(ric);
  ric->add_option("--point", c.point, "x,y (or x,y,q,p,kappa with --paper-verbatim)")->delimiter(',');
  ric->add_flag("--paper-verbatim", c.paper_verbatim, "report printed closed forms against derived ones");

  auto * phi = app.add_subcommand("phi-solve", "solve for the almost contact metric tensor");
  model_flags(phi);
  phi->add_option("--free", c.free, "Phi_yq,Phi_yp,Phi_qp,Phi_pq")->delimiter(',');
  phi->add_option("--point", c.point, "x,y,q,p,kappa")->delimiter(',');

  auto * suite = app.add_subcommand("invariant-suite", "catalog property checks");
  model_flags(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  CLI::App * sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    if (!config.empty()) apply_config(config, c, *sub);
    for (const char * flag : {"--a", "--b", "--c", "--m", "--n", "--h-kappa"})
      if (sub->get_option_no_throw(flag) && sub->count(flag) > 0) c.coeffs_given = true;
    validate(c, name);
    if (name == "list-manifolds") return cmd_list(c);
    if (name == "check-structure") return cmd_check(c);
    if (name == "reeb") return cmd_reeb(c);
    if (name == "field") return cmd_field(c);
    if (name == "bracket") return cmd_bracket(c);
    if (name == "integrate") return cmd_integrate(c);
    if (name == "compare") return cmd_compare(c);
    if (name == "riccati") return cmd_riccati(c);
    if (name == "phi-solve") return cmd_phi(c);
    if (name == "invariant-suite") return cmd_suite(c);
  } catch (const ParseError & e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInput;
  } catch (const NumericalFailure & e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DegenerateStructure & e) {
    std::cerr << "degenerate structure: " << e.what() << '\n';
    return kNumerical;
  } catch (const UsageError & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const Error & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}
