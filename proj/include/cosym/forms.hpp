#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "cosym/chart.hpp"
#include "cosym/field.hpp"

namespace cosym {

/// Index tuple of a basis form dx^{i1} ∧ ... ∧ dx^{ik}; stored strictly increasing.
using MultiIndex = std::vector<int>;

/// Sort `idx` in place and return the permutation sign (0 when an index repeats).
int normalize(MultiIndex & idx);

/// All strictly increasing index tuples of length k drawn from [0, n).
std::vector<MultiIndex> increasing_indices(int n, int k);

/**
 * Pointwise value of a k-form: sparse coefficient table over increasing
 * multi-indices. Templated on the scalar so the algebra can run on dual
 * numbers or long double if needed.
 */
template <typename Scalar = double>
class FormValue
{
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  FormValue(int dimension, int degree) : dimension_(dimension), degree_(degree)
  {
    if (degree < 0 || degree > dimension) throw std::invalid_argument("FormValue: degree out of range");
  }

  /// Degree-1 value from a coefficient vector.
  static FormValue covector(const Vector & v)
  {
    FormValue f(static_cast<int>(v.size()), 1);
    for (Eigen::Index i = 0; i < v.size(); ++i) f.add({static_cast<int>(i)}, v[i]);
    return f;
  }

  /// Degree-2 value from an antisymmetric matrix (upper triangle is read).
  static FormValue from_matrix(const Matrix & m)
  {
    FormValue f(static_cast<int>(m.rows()), 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = i + 1; j < m.cols(); ++j) f.add({static_cast<int>(i), static_cast<int>(j)}, m(i, j));
    return f;
  }

  int dimension() const noexcept { return dimension_; }
  int degree() const noexcept { return degree_; }
  const std::map<MultiIndex, Scalar> & components() const noexcept { return c_; }

  /// Coefficient for any ordering of the indices (sign applied).
  Scalar operator[](MultiIndex idx) const
  {
    const int s = normalize(idx);
    if (s == 0) return Scalar(0);
    auto it = c_.find(idx);
    return it == c_.end() ? Scalar(0) : Scalar(s) * it->second;
  }

  FormValue & add(MultiIndex idx, Scalar value)
  {
    if (static_cast<int>(idx.size()) != degree_) throw std::invalid_argument("FormValue::add: wrong index length");
    const int s = normalize(idx);
    if (s == 0 || value == Scalar(0)) return *this;
    if (!idx.empty() && (idx.front() < 0 || idx.back() >= dimension_))
      throw std::out_of_range("FormValue::add: index out of range");
    c_[idx] += Scalar(s) * value;
    return *this;
  }

  Vector vector() const
  {
    if (degree_ != 1) throw std::logic_error("FormValue::vector: degree is not 1");
    Vector v = Vector::Zero(dimension_);
    for (const auto & [idx, val] : c_) v[idx[0]] = val;
    return v;
  }

  /// Antisymmetric coefficient matrix M with f(X, Y) = Xᵀ M Y.
  Matrix matrix() const
  {
    if (degree_ != 2) throw std::logic_error("FormValue::matrix: degree is not 2");
    Matrix m = Matrix::Zero(dimension_, dimension_);
    for (const auto & [idx, val] : c_) {
      m(idx[0], idx[1]) = val;
      m(idx[1], idx[0]) = -val;
    }
    return m;
  }

  /// Coefficient of dx^0 ∧ ... ∧ dx^{n-1}.
  Scalar top() const
  {
    if (degree_ != dimension_) throw std::logic_error("FormValue::top: not a top-degree form");
    return c_.empty() ? Scalar(0) : c_.begin()->second;
  }

  /// f(v_1, ..., v_k) with the vectors as columns.
  Scalar evaluate(const Matrix & vectors) const
  {
    if (vectors.rows() != dimension_ || vectors.cols() != degree_)
      throw std::invalid_argument("FormValue::evaluate: shape mismatch");
    if (degree_ == 0) return c_.empty() ? Scalar(0) : c_.begin()->second;
    Scalar sum(0);
    Matrix minor(degree_, degree_);
    for (const auto & [idx, val] : c_) {
      for (int r = 0; r < degree_; ++r) minor.row(r) = vectors.row(idx[static_cast<std::size_t>(r)]);
      sum += val * minor.determinant();
    }
    return sum;
  }

  Scalar max_abs() const
  {
    Scalar m(0);
    for (const auto & [idx, val] : c_) m = std::max<Scalar>(m, std::abs(val));
    return m;
  }

  friend FormValue operator+(FormValue a, const FormValue & b)
  {
    a.require_compatible(b);
    for (const auto & [idx, val] : b.c_) a.c_[idx] += val;
    return a;
  }
  friend FormValue operator-(FormValue a, const FormValue & b)
  {
    a.require_compatible(b);
    for (const auto & [idx, val] : b.c_) a.c_[idx] -= val;
    return a;
  }
  friend FormValue operator*(Scalar s, FormValue a)
  {
    for (auto & [idx, val] : a.c_) val *= s;
    return a;
  }

private:
  void require_compatible(const FormValue & b) const
  {
    if (dimension_ != b.dimension_ || degree_ != b.degree_)
      throw std::invalid_argument("FormValue: incompatible operands");
  }

  int dimension_;
  int degree_;
  std::map<MultiIndex, Scalar> c_;
};

template <typename Scalar>
FormValue<Scalar> wedge(const FormValue<Scalar> & a, const FormValue<Scalar> & b)
{
  if (a.dimension() != b.dimension()) throw std::invalid_argument("wedge: dimension mismatch");
  if (a.degree() + b.degree() > a.dimension()) throw std::invalid_argument("wedge: degree overflow");
  FormValue<Scalar> out(a.dimension(), a.degree() + b.degree());
  for (const auto & [i, x] : a.components())
    for (const auto & [j, y] : b.components()) {
      MultiIndex k = i;
      k.insert(k.end(), j.begin(), j.end());
      const int s = normalize(k);
      if (s != 0) out.add(k, Scalar(s) * x * y);
    }
  return out;
}

/// X ⌟ f, contraction in the first slot.
template <typename Scalar>
FormValue<Scalar> interior_product(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> & X, const FormValue<Scalar> & f)
{
  if (f.degree() < 1) throw std::invalid_argument("interior_product: degree 0 form");
  if (X.size() != f.dimension()) throw std::invalid_argument("interior_product: dimension mismatch");
  FormValue<Scalar> out(f.dimension(), f.degree() - 1);
  for (const auto & [idx, val] : f.components())
    for (std::size_t m = 0; m < idx.size(); ++m) {
      MultiIndex rest;
      rest.reserve(idx.size() - 1);
      for (std::size_t r = 0; r < idx.size(); ++r)
        if (r != m) rest.push_back(idx[r]);
      const Scalar sign = (m % 2 == 0) ? Scalar(1) : Scalar(-1);
      out.add(rest, sign * X[idx[m]] * val);
    }
  return out;
}

/// Differential k-form on a chart with field coefficients.
class KForm
{
public:
  KForm(ChartRef chart, int degree);

  /// Degree-0 form holding `f`.
  static KForm function(const ScalarField & f);
  /// df of a scalar field.
  static KForm differential(const ScalarField & f);

  const ChartRef & chart() const noexcept { return chart_; }
  int degree() const noexcept { return degree_; }
  int dimension() const noexcept { return chart_->dimension(); }
  const std::map<MultiIndex, ScalarField> & terms() const noexcept { return terms_; }

  /// Accumulate `coefficient` on the basis form for `idx` (any order; sign applied).
  KForm & add(MultiIndex idx, const ScalarField & coefficient);
  /// Convenience: add a coefficient given as expression text.
  KForm & add(MultiIndex idx, std::string_view coefficient, const Parameters & parameters = {});

  ScalarField coefficient(MultiIndex idx) const;
  bool is_symbolic() const;

  FormValue<double> operator()(const ChartPoint & at) const;
  FormValue<double> evaluate(std::span<const double> x) const;

private:
  ChartRef chart_;
  int degree_;
  std::map<MultiIndex, ScalarField> terms_;
};

KForm operator+(const KForm & a, const KForm & b);
KForm operator-(const KForm & a, const KForm & b);
KForm operator*(const ScalarField & f, const KForm & a);

KForm wedge(const KForm & a, const KForm & b);
KForm exterior_derivative(const KForm & f);

FormValue<double> interior_product(const VectorField & X, const KForm & f, const ChartPoint & at);
/// Field-level contraction X ⌟ f.
KForm interior_product(const VectorField & X, const KForm & f);

/// Smooth map between charts, one component field (on the source chart) per target coordinate.
class ChartMap
{
public:
  ChartMap(ChartRef source, ChartRef target, std::vector<ScalarField> components);
  static ChartMap identity(const ChartRef & chart);

  const ChartRef & source() const noexcept { return source_; }
  const ChartRef & target() const noexcept { return target_; }
  const std::vector<ScalarField> & components() const noexcept { return components_; }
  bool is_symbolic() const;

  /// Image point; throws DomainError if it leaves the target domain.
  ChartPoint apply(const ChartPoint & at) const;
  /// ∂(target_k)/∂(source_j), rows indexed by target coordinates.
  Eigen::MatrixXd jacobian(const ChartPoint & at) const;

private:
  ChartRef source_;
  ChartRef target_;
  std::vector<ScalarField> components_;
};

FormValue<double> pullback(const ChartMap & m, const KForm & f, const ChartPoint & at);
/// Field-level pullback; symbolic when both the map and the form are.
KForm pullback(const ChartMap & m, const KForm & f);

}  // namespace cosym
