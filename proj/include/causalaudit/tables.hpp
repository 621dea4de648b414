#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "causalaudit/categories.hpp"

namespace causalaudit {

/// Raw audit input: integer counts per (s, d, a) cell.
class ContingencyTable3 {
 public:
  ContingencyTable3(CategorySpace space, std::vector<std::uint64_t> counts);

  const CategorySpace& space() const { return space_; }
  std::uint64_t count(int s, int d, int a) const {
    return counts_[space_.index(s, d, a)];
  }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total() const { return total_; }

 private:
  CategorySpace space_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_;
};

/// A point in the probability simplex over S x D x A. Entries are
/// non-negative and sum to 1 within 1e-12.
class JointDistribution {
 public:
  JointDistribution(CategorySpace space, std::vector<double> probs);

  const CategorySpace& space() const { return space_; }
  double prob(int s, int d, int a) const {
    return probs_[space_.index(s, d, a)];
  }
  const std::vector<double>& probs() const { return probs_; }

 private:
  CategorySpace space_;
  std::vector<double> probs_;
};

/// Conditional kernel K(D, A | S): for each s the entries over (d, a) form
/// a probability vector (sum 1 within 1e-12).
class ConditionalKernel {
 public:
  ConditionalKernel(CategorySpace space, std::vector<double> kernel);

  const CategorySpace& space() const { return space_; }
  int n_mediator() const { return space_.n_mediator(); }
  double at(int d, int a, int s) const {
    return kernel_[space_.index(s, d, a)];
  }
  const std::vector<double>& values() const { return kernel_; }

 private:
  CategorySpace space_;
  std::vector<double> kernel_;
};

/// Fixed label orders for the three CSV columns. Empty vectors mean
/// "order by first appearance in the file".
struct LabelCoding {
  std::vector<std::string> s_labels;
  std::vector<std::string> d_labels;
  std::vector<std::string> a_labels;
};

/// Parses the long CSV schema `sex,department,admitted,count`. Counts for
/// repeated (s, d, a) rows accumulate. Throws ParseError with a line
/// number on malformed rows, ValidationError on negative counts and
/// SchemaError when more than two sex or admitted labels appear.
ContingencyTable3 parse_long_csv(std::istream& in, const LabelCoding& coding = {});
ContingencyTable3 parse_long_csv(const std::string& text, const LabelCoding& coding = {});
ContingencyTable3 parse_long_csv_file(const std::string& path, const LabelCoding& coding = {});

/// Re-serializes a table under the same schema (cells in index order,
/// zero cells included).
std::string serialize_long_csv(const ContingencyTable3& table);

/// Maximum-likelihood joint: probs = counts / total. Throws
/// ValidationError when the table is empty.
JointDistribution empirical_joint(const ContingencyTable3& table);

/// K(d, a | s) = P(s, d, a) / P(s). Throws PositivityError naming the
/// empty stratum when some P(S = s) is zero.
ConditionalKernel conditional_kernel(const JointDistribution& joint);

/// Joint built from a kernel and a marginal over S (P(s) > 0 required).
JointDistribution joint_from_kernel(const ConditionalKernel& kernel,
                                    const std::vector<double>& p_s);

}  // namespace causalaudit
