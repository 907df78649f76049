#pragma once

#include "coarse/metric_space.hpp"

#include <string>
#include <vector>

namespace coarse {

/// Finite group given by a full multiplication table over indexed elements,
/// with a symmetric generating set (closed under inverses, identity excluded).
/// The table, identity, inverses and generation are all checked exhaustively
/// at construction.
class FiniteGroup {
public:
  FiniteGroup(std::vector<std::string> elements, Eigen::MatrixXi table,
              std::vector<int> generators);

  int order() const { return static_cast<int>(elements_.size()); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& element(int i) const { return elements_.at(static_cast<std::size_t>(i)); }
  int multiply(int a, int b) const { return table_(a, b); }
  int inverse(int a) const { return inverse_.at(static_cast<std::size_t>(a)); }
  int identity() const { return identity_; }
  const std::vector<int>& generators() const { return generators_; }
  const Eigen::MatrixXi& table() const { return table_; }

  int index_of(const std::string& id) const;

private:
  std::vector<std::string> elements_;
  Eigen::MatrixXi table_;
  int identity_ = -1;
  std::vector<int> inverse_;
  std::vector<int> generators_;
};

/// Word lengths |g| with respect to the generating set, by breadth-first
/// search from the identity.
std::vector<Dist> word_lengths(const FiniteGroup& G);

/// The left-invariant word metric d(g,h) = |g^{-1}h| as a metric space whose
/// points are the group elements (scale 1).
FiniteMetricSpace word_metric(const FiniteGroup& G);

// Group families used by the search tools and the test suites.
FiniteGroup make_cyclic_group(int m);
FiniteGroup make_dihedral_group(int m);  // order 2m
FiniteGroup make_symmetric_group(int n); // order n!, adjacent transpositions

}  // namespace coarse
