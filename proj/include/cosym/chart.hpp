#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cosym/expr.hpp"

namespace cosym {

enum class GuardOp { greater, less };

/// Strict inequality `coordinate > bound` (or `<`).
struct DomainGuard
{
  std::string coordinate;
  GuardOp op{GuardOp::greater};
  double bound{0.0};
};

/// Extra constraint that is not a coordinate bound, e.g. |w| < 1 on a disk chart.
struct PredicateGuard
{
  std::string description;
  std::function<bool(std::span<const double>)> holds;
};

class Chart;
using ChartRef = std::shared_ptr<const Chart>;

class Chart
{
public:
  Chart(std::string name, std::vector<std::string> coordinates, std::vector<DomainGuard> guards = {},
        std::vector<PredicateGuard> predicates = {});

  static ChartRef make(std::string name, std::vector<std::string> coordinates,
                       std::vector<DomainGuard> guards = {}, std::vector<PredicateGuard> predicates = {});

  const std::string & name() const noexcept { return name_; }
  const std::vector<std::string> & coordinates() const noexcept { return coordinates_; }
  int dimension() const noexcept { return static_cast<int>(coordinates_.size()); }
  const std::vector<DomainGuard> & guards() const noexcept { return guards_; }
  const std::vector<PredicateGuard> & predicates() const noexcept { return predicates_; }

  /// Slot of a coordinate, or nullopt.
  std::optional<int> find(std::string_view coordinate) const;
  /// Slot of a coordinate; throws ChartMismatch when absent.
  int index_of(std::string_view coordinate) const;

  bool contains(std::span<const double> values) const;
  /// Throws DomainError naming the first violated guard.
  void check(std::span<const double> values) const;

  expr::SymbolTable symbols(const Parameters & parameters = {}) const;

private:
  std::string name_;
  std::vector<std::string> coordinates_;
  std::vector<DomainGuard> guards_;
  std::vector<PredicateGuard> predicates_;
};

/// Same name and coordinate list. Charts rebuilt from JSON compare equal to the originals.
bool same_chart(const Chart & a, const Chart & b);
void require_same_chart(const Chart & a, const Chart & b, std::string_view what);

/// A validated coordinate tuple; construction fails with DomainError outside the guards.
class ChartPoint
{
public:
  ChartPoint(ChartRef chart, Eigen::VectorXd values);
  ChartPoint(ChartRef chart, std::initializer_list<double> values);

  const ChartRef & chart() const noexcept { return chart_; }
  const Eigen::VectorXd & values() const noexcept { return values_; }
  double operator[](int i) const { return values_[i]; }
  double operator[](std::string_view coordinate) const { return values_[chart_->index_of(coordinate)]; }
  std::span<const double> span() const noexcept
  {
    return {values_.data(), static_cast<std::size_t>(values_.size())};
  }

private:
  ChartRef chart_;
  Eigen::VectorXd values_;
};

/**
 * Sampling box used for probe and random points: each coordinate ranges over
 * [-half_width, half_width], except guarded ones which are shifted to
 * (bound + margin, bound + margin + 2 half_width] (mirrored for `<` guards).
 * Predicate guards are enforced by rejection.
 */
struct SamplingBox
{
  double half_width{2.0};
  double margin{0.25};
};

/// Deterministic Halton sequence of in-domain points (default classification probes).
std::vector<ChartPoint> probe_points(const ChartRef & chart, int count = 64, SamplingBox box = {});

ChartPoint random_point(const ChartRef & chart, std::mt19937_64 & rng, SamplingBox box = {});

}  // namespace cosym
