#include "cosym/serialization.hpp"

#include <charconv>
#include <cmath>

#include "cosym/error.hpp"

namespace cosym {

using nlohmann::json;

std::string format_double(double v)
{
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

namespace {

json form_to_json(const KForm & f)
{
  json terms = json::array();
  for (const auto & [idx, coeff] : f.terms()) {
    if (!coeff.is_symbolic()) throw Error("structure_to_json: opaque coefficient cannot be serialized");
    terms.push_back({{"index", idx}, {"coefficient", coeff.to_string()}});
  }
  return terms;
}

KForm form_from_json(const json & terms, const ChartRef & chart, int degree, const Parameters & par)
{
  if (!terms.is_array()) throw Error("structure JSON: form must be an array of terms");
  KForm f(chart, degree);
  for (const auto & t : terms) {
    auto idx = t.at("index").get<MultiIndex>();
    if (static_cast<int>(idx.size()) != degree) throw Error("structure JSON: index has the wrong degree");
    for (int i : idx)
      if (i < 0 || i >= chart->dimension()) throw Error("structure JSON: index out of range");
    f.add(std::move(idx), t.at("coefficient").get<std::string>(), par);
  }
  return f;
}

}  // namespace

json structure_to_json(const StructureSpec & s)
{
  const Chart & c = *s.chart();
  if (!c.predicates().empty()) throw Error("structure_to_json: chart '" + c.name() + "' has predicate guards");
  json guards = json::array();
  for (const auto & g : c.guards())
    guards.push_back({{"coordinate", g.coordinate}, {"op", g.op == GuardOp::greater ? ">" : "<"}, {"bound", g.bound}});
  json par = json::object();
  for (const auto & [k, v] : s.parameters()) par[k] = v;
  return {{"name", s.name()},
          {"chart", {{"name", c.name()}, {"coordinates", c.coordinates()}, {"guards", guards}}},
          {"parameters", par},
          {"theta", form_to_json(s.theta())},
          {"omega", form_to_json(s.omega())}};
}

StructureSpec structure_from_json(const json & doc)
{
  try {
    const json & jc = doc.at("chart");
    std::vector<DomainGuard> guards;
    const json jg = jc.value("guards", json::array());
    for (const auto & g : jg) {
      const auto op = g.at("op").get<std::string>();
      if (op != ">" && op != "<") throw Error("structure JSON: guard op must be '>' or '<'");
      guards.push_back({g.at("coordinate").get<std::string>(), op == ">" ? GuardOp::greater : GuardOp::less,
                        g.at("bound").get<double>()});
    }
    const ChartRef chart =
        Chart::make(jc.at("name").get<std::string>(), jc.at("coordinates").get<std::vector<std::string>>(), guards);
    Parameters par;
    const json jp = doc.value("parameters", json::object());
    for (const auto & [k, v] : jp.items()) par[k] = v.get<double>();
    return StructureSpec(doc.at("name").get<std::string>(), form_from_json(doc.at("theta"), chart, 1, par),
                         form_from_json(doc.at("omega"), chart, 2, par), par);
  } catch (const json::exception & e) {
    throw Error(std::string("structure JSON: ") + e.what());
  }
}

void write_trajectory_csv(std::ostream & os, const Trajectory & traj)
{
  if (traj.states.empty()) return;
  os << 't';
  for (const auto & name : traj.states.front().chart()->coordinates()) os << ',' << name;
  os << ",H,dissipation_residual\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << format_double(traj.times[k]);
    for (double v : traj.states[k].values()) os << ',' << format_double(v);
    os << ',' << format_double(traj.hamiltonian_values[k]) << ',' << format_double(traj.dissipation_residuals[k])
       << '\n';
  }
}

json trajectory_to_json(const Trajectory & traj)
{
  json rows = json::array();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto & v = traj.states[k].values();
    const double r = traj.dissipation_residuals[k];
    rows.push_back({{"t", traj.times[k]},
                    {"state", std::vector<double>(v.data(), v.data() + v.size())},
                    {"H", traj.hamiltonian_values[k]},
                    {"dissipation_residual", std::isfinite(r) ? json(r) : json(nullptr)}});
  }
  json coords = traj.states.empty() ? json::array() : json(traj.states.front().chart()->coordinates());
  return {{"coordinates", coords}, {"complete", traj.complete}, {"diagnostic", traj.diagnostic}, {"samples", rows}};
}

}  // namespace cosym
