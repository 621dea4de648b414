#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace causalaudit {

/// Label space for the three audited variables: a binary protected
/// attribute S, a categorical mediator D with n >= 2 values, and a binary
/// outcome A. Index 0 of the outcome always means "reject", index 1
/// "accept"; which label carries which index is fixed at construction.
class CategorySpace {
 public:
  CategorySpace(std::vector<std::string> s_labels,
                std::vector<std::string> d_labels,
                std::vector<std::string> a_labels);

  // Canonical space with labels s0/s1, d0..d{n-1}, a0/a1.
  static CategorySpace canonical(int n_mediator);

  int n_mediator() const { return static_cast<int>(d_labels_.size()); }
  std::size_t cells() const { return 4 * d_labels_.size(); }

  // Flat cell index, s-major then d then a.
  std::size_t index(int s, int d, int a) const {
    return (static_cast<std::size_t>(s) * d_labels_.size() + d) * 2 + a;
  }

  const std::vector<std::string>& s_labels() const { return s_labels_; }
  const std::vector<std::string>& d_labels() const { return d_labels_; }
  const std::vector<std::string>& a_labels() const { return a_labels_; }

  bool operator==(const CategorySpace& other) const = default;

 private:
  std::vector<std::string> s_labels_;
  std::vector<std::string> d_labels_;
  std::vector<std::string> a_labels_;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PositivityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line(line) {}
  std::size_t line;
};

}  // namespace causalaudit
