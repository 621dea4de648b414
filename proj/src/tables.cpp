#include "causalaudit/tables.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace causalaudit {

namespace {

constexpr double kSumTolerance = 1e-12;

void check_labels(const std::vector<std::string>& labels, std::size_t exact,
                  const char* what) {
  if (exact > 0 && labels.size() != exact) {
    throw SchemaError(std::string(what) + ": expected " +
                      std::to_string(exact) + " labels, got " +
                      std::to_string(labels.size()));
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw SchemaError(std::string(what) + ": duplicate label '" + l + "'");
    }
  }
}

}  // namespace

CategorySpace::CategorySpace(std::vector<std::string> s_labels,
                             std::vector<std::string> d_labels,
                             std::vector<std::string> a_labels)
    : s_labels_(std::move(s_labels)),
      d_labels_(std::move(d_labels)),
      a_labels_(std::move(a_labels)) {
  check_labels(s_labels_, 2, "sex labels");
  check_labels(a_labels_, 2, "admitted labels");
  check_labels(d_labels_, 0, "department labels");
  if (d_labels_.size() < 2) {
    throw SchemaError("need at least 2 department labels, got " +
                      std::to_string(d_labels_.size()));
  }
}

CategorySpace CategorySpace::canonical(int n_mediator) {
  std::vector<std::string> d;
  d.reserve(n_mediator);
  for (int i = 0; i < n_mediator; ++i) d.push_back("d" + std::to_string(i));
  return CategorySpace({"s0", "s1"}, std::move(d), {"a0", "a1"});
}

ContingencyTable3::ContingencyTable3(CategorySpace space,
                                     std::vector<std::uint64_t> counts)
    : space_(std::move(space)), counts_(std::move(counts)) {
  if (counts_.size() != space_.cells()) {
    throw ValidationError("count vector size does not match label space");
  }
  total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

JointDistribution::JointDistribution(CategorySpace space,
                                     std::vector<double> probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
  if (probs_.size() != space_.cells()) {
    throw ValidationError("probability vector size does not match label space");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw ValidationError("negative or NaN probability entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ValidationError("joint probabilities sum to " + std::to_string(sum) +
                          ", not 1");
  }
}

ConditionalKernel::ConditionalKernel(CategorySpace space,
                                     std::vector<double> kernel)
    : space_(std::move(space)), kernel_(std::move(kernel)) {
  if (kernel_.size() != space_.cells()) {
    throw ValidationError("kernel size does not match label space");
  }
  const int n = space_.n_mediator();
  for (int s = 0; s < 2; ++s) {
    double sum = 0.0;
    for (int d = 0; d < n; ++d) {
      for (int a = 0; a < 2; ++a) {
        const double v = kernel_[space_.index(s, d, a)];
        if (!(v >= 0.0)) throw ValidationError("negative or NaN kernel entry");
        sum += v;
      }
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw ValidationError("kernel stratum s=" + std::to_string(s) +
                            " sums to " + std::to_string(sum) + ", not 1");
    }
  }
}

namespace {

// Splits one CSV line into exactly `n` comma-separated fields. The schema
// is strict: no quoting, no embedded commas.
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

int lookup_or_append(std::vector<std::string>& labels, const std::string& label,
                     bool pinned, const char* column, std::size_t line_no) {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it != labels.end()) return static_cast<int>(it - labels.begin());
  if (pinned) {
    throw ParseError(std::string("label '") + label + "' for column " +
                         column + " not in the supplied coding",
                     line_no);
  }
  labels.push_back(label);
  return static_cast<int>(labels.size() - 1);
}

}  // namespace

ContingencyTable3 parse_long_csv(std::istream& in, const LabelCoding& coding) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "sex,department,admitted,count") {
    throw ParseError("header must be exactly 'sex,department,admitted,count'",
                     line_no);
  }

  std::vector<std::string> s_labels = coding.s_labels;
  std::vector<std::string> d_labels = coding.d_labels;
  std::vector<std::string> a_labels = coding.a_labels;
  const bool s_pinned = !s_labels.empty();
  const bool d_pinned = !d_labels.empty();
  const bool a_pinned = !a_labels.empty();

  struct Row {
    int s, d, a;
    std::uint64_t count;
  };
  std::vector<Row> rows;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 4) {
      throw ParseError("expected 4 comma-separated fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      throw ParseError("empty label field", line_no);
    }
    const std::string& count_text = fields[3];
    if (count_text.empty()) throw ParseError("empty count field", line_no);
    if (count_text[0] == '-') {
      throw ValidationError("negative count '" + count_text + "' on line " +
                            std::to_string(line_no));
    }
    std::uint64_t count = 0;
    for (char c : count_text) {
      if (c < '0' || c > '9') {
        throw ParseError("count '" + count_text + "' is not a non-negative integer",
                         line_no);
      }
      count = count * 10 + static_cast<std::uint64_t>(c - '0');
    }

    const int s = lookup_or_append(s_labels, fields[0], s_pinned, "sex", line_no);
    const int d = lookup_or_append(d_labels, fields[1], d_pinned, "department", line_no);
    const int a = lookup_or_append(a_labels, fields[2], a_pinned, "admitted", line_no);
    if (s_labels.size() > 2) throw SchemaError("more than 2 distinct sex labels");
    if (a_labels.size() > 2) throw SchemaError("more than 2 distinct admitted labels");
    rows.push_back({s, d, a, count});
  }

  if (s_labels.size() != 2) {
    throw SchemaError("need exactly 2 sex labels, saw " +
                      std::to_string(s_labels.size()));
  }
  if (a_labels.size() != 2) {
    throw SchemaError("need exactly 2 admitted labels, saw " +
                      std::to_string(a_labels.size()));
  }

  CategorySpace space(s_labels, d_labels, a_labels);
  std::vector<std::uint64_t> counts(space.cells(), 0);
  for (const Row& r : rows) counts[space.index(r.s, r.d, r.a)] += r.count;
  return ContingencyTable3(std::move(space), std::move(counts));
}

ContingencyTable3 parse_long_csv(const std::string& text, const LabelCoding& coding) {
  std::istringstream in(text);
  return parse_long_csv(in, coding);
}

ContingencyTable3 parse_long_csv_file(const std::string& path,
                                      const LabelCoding& coding) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  return parse_long_csv(in, coding);
}

std::string serialize_long_csv(const ContingencyTable3& table) {
  const CategorySpace& sp = table.space();
  std::ostringstream out;
  out << "sex,department,admitted,count\n";
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < sp.n_mediator(); ++d) {
      for (int a = 0; a < 2; ++a) {
        out << sp.s_labels()[s] << ',' << sp.d_labels()[d] << ','
            << sp.a_labels()[a] << ',' << table.count(s, d, a) << '\n';
      }
    }
  }
  return out.str();
}

JointDistribution empirical_joint(const ContingencyTable3& table) {
  if (table.total() == 0) {
    throw ValidationError("cannot form the empirical joint of an empty table");
  }
  const double total = static_cast<double>(table.total());
  std::vector<double> probs(table.counts().size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = static_cast<double>(table.counts()[i]) / total;
  }
  return JointDistribution(table.space(), std::move(probs));
}

ConditionalKernel conditional_kernel(const JointDistribution& joint) {
  const CategorySpace& sp = joint.space();
  const int n = sp.n_mediator();
  std::vector<double> kernel(sp.cells());
  for (int s = 0; s < 2; ++s) {
    double p_s = 0.0;
    for (int d = 0; d < n; ++d) {
      for (int a = 0; a < 2; ++a) p_s += joint.prob(s, d, a);
    }
    if (p_s <= 0.0) {
      throw PositivityError("P(S = " + sp.s_labels()[s] +
                            ") is zero; conditional kernel undefined");
    }
    for (int d = 0; d < n; ++d) {
      for (int a = 0; a < 2; ++a) {
        kernel[sp.index(s, d, a)] = joint.prob(s, d, a) / p_s;
      }
    }
  }
  return ConditionalKernel(sp, std::move(kernel));
}

JointDistribution joint_from_kernel(const ConditionalKernel& kernel,
                                    const std::vector<double>& p_s) {
  if (p_s.size() != 2) throw ValidationError("P(S) must have 2 entries");
  if (!(p_s[0] > 0.0) || !(p_s[1] > 0.0)) {
    throw PositivityError("P(S) must be strictly positive in both strata");
  }
  const CategorySpace& sp = kernel.space();
  std::vector<double> probs(sp.cells());
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < sp.n_mediator(); ++d) {
      for (int a = 0; a < 2; ++a) {
        probs[sp.index(s, d, a)] = p_s[s] * kernel.at(d, a, s);
      }
    }
  }
  return JointDistribution(sp, std::move(probs));
}

}  // namespace causalaudit
