#include "cosym/chart.hpp"

#include <sstream>

#include "cosym/error.hpp"

namespace cosym {

Chart::Chart(std::string name, std::vector<std::string> coordinates, std::vector<DomainGuard> guards,
             std::vector<PredicateGuard> predicates)
    : name_(std::move(name)),
      coordinates_(std::move(coordinates)),
      guards_(std::move(guards)),
      predicates_(std::move(predicates))
{
  if (coordinates_.empty()) throw Error("chart '" + name_ + "' has no coordinates");
  for (std::size_t i = 0; i < coordinates_.size(); ++i)
    for (std::size_t j = i + 1; j < coordinates_.size(); ++j)
      if (coordinates_[i] == coordinates_[j])
        throw Error("chart '" + name_ + "' repeats coordinate '" + coordinates_[i] + "'");
  for (const auto & g : guards_)
    if (!find(g.coordinate))
      throw Error("chart '" + name_ + "': guard references unknown coordinate '" + g.coordinate + "'");
}

ChartRef Chart::make(std::string name, std::vector<std::string> coordinates, std::vector<DomainGuard> guards,
                     std::vector<PredicateGuard> predicates)
{
  return std::make_shared<const Chart>(std::move(name), std::move(coordinates), std::move(guards),
                                       std::move(predicates));
}

std::optional<int> Chart::find(std::string_view coordinate) const
{
  for (std::size_t i = 0; i < coordinates_.size(); ++i)
    if (coordinates_[i] == coordinate) return static_cast<int>(i);
  return std::nullopt;
}

int Chart::index_of(std::string_view coordinate) const
{
  if (auto i = find(coordinate)) return *i;
  throw ChartMismatch("chart '" + name_ + "' has no coordinate '" + std::string(coordinate) + "'");
}

namespace {

bool guard_holds(const DomainGuard & g, double v)
{
  return g.op == GuardOp::greater ? v > g.bound : v < g.bound;
}

}  // namespace

bool Chart::contains(std::span<const double> values) const
{
  if (values.size() != coordinates_.size()) return false;
  for (const auto & g : guards_)
    if (!guard_holds(g, values[static_cast<std::size_t>(*find(g.coordinate))])) return false;
  for (const auto & p : predicates_)
    if (!p.holds(values)) return false;
  return true;
}

void Chart::check(std::span<const double> values) const
{
  if (values.size() != coordinates_.size()) {
    std::ostringstream msg;
    msg << "chart '" << name_ << "' expects " << coordinates_.size() << " coordinates, got " << values.size();
    throw DomainError(msg.str());
  }
  for (const auto & g : guards_) {
    double v = values[static_cast<std::size_t>(*find(g.coordinate))];
    if (!guard_holds(g, v)) {
      std::ostringstream msg;
      msg << "point violates " << g.coordinate << (g.op == GuardOp::greater ? " > " : " < ") << g.bound
          << " on chart '" << name_ << "' (" << g.coordinate << " = " << v << ")";
      throw DomainError(msg.str());
    }
  }
  for (const auto & p : predicates_)
    if (!p.holds(values)) throw DomainError("point violates " + p.description + " on chart '" + name_ + "'");
}

expr::SymbolTable Chart::symbols(const Parameters & parameters) const
{
  return expr::SymbolTable{coordinates_, parameters};
}

bool same_chart(const Chart & a, const Chart & b)
{
  return &a == &b || (a.name() == b.name() && a.coordinates() == b.coordinates());
}

void require_same_chart(const Chart & a, const Chart & b, std::string_view what)
{
  if (!same_chart(a, b))
    throw ChartMismatch(std::string(what) + ": chart '" + a.name() + "' does not match chart '" + b.name() + "'");
}

ChartPoint::ChartPoint(ChartRef chart, Eigen::VectorXd values) : chart_(std::move(chart)), values_(std::move(values))
{
  chart_->check(span());
}

ChartPoint::ChartPoint(ChartRef chart, std::initializer_list<double> values)
    : ChartPoint(std::move(chart), Eigen::Map<const Eigen::VectorXd>(values.begin(), static_cast<Eigen::Index>(values.size())))
{}

namespace {

// Map u in [0,1) to the sampling interval of coordinate i.
double to_box(const Chart & chart, int i, double u, const SamplingBox & box)
{
  const std::string & name = chart.coordinates()[static_cast<std::size_t>(i)];
  double lo = -box.half_width, hi = box.half_width;
  for (const auto & g : chart.guards()) {
    if (g.coordinate != name) continue;
    if (g.op == GuardOp::greater) {
      lo = std::max(lo, g.bound + box.margin);
      if (hi <= lo) hi = lo + 2.0 * box.half_width;
    } else {
      hi = std::min(hi, g.bound - box.margin);
      if (lo >= hi) lo = hi - 2.0 * box.half_width;
    }
  }
  return lo + (hi - lo) * u;
}

double radical_inverse(int base, long index)
{
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

std::vector<ChartPoint> probe_points(const ChartRef & chart, int count, SamplingBox box)
{
  const int d = chart->dimension();
  if (d > static_cast<int>(std::size(primes))) throw Error("probe_points: chart dimension too large");
  std::vector<ChartPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  Eigen::VectorXd v(d);
  for (long index = 1; static_cast<int>(out.size()) < count; ++index) {
    if (index > 1000L * count + 1000) throw Error("probe_points: domain of chart '" + chart->name() + "' too thin");
    for (int i = 0; i < d; ++i) v[i] = to_box(*chart, i, radical_inverse(primes[i], index), box);
    if (chart->contains({v.data(), static_cast<std::size_t>(d)})) out.emplace_back(chart, v);
  }
  return out;
}

ChartPoint random_point(const ChartRef & chart, std::mt19937_64 & rng, SamplingBox box)
{
  const int d = chart->dimension();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd v(d);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (int i = 0; i < d; ++i) v[i] = to_box(*chart, i, unit(rng), box);
    if (chart->contains({v.data(), static_cast<std::size_t>(d)})) return ChartPoint(chart, v);
  }
  throw Error("random_point: domain of chart '" + chart->name() + "' too thin");
}

}  // namespace cosym
