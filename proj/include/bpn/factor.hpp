#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace bpn {

struct VarSpec {
  std::string name;
  std::vector<std::string> values;

  std::size_t size() const { return values.size(); }
  bool operator==(const VarSpec&) const = default;
};

VarSpec binary_var(const std::string& name);

// Partial map from variable names to values.
using Assignment = std::map<std::string, std::string>;

Assignment project(const Assignment& a, const std::set<std::string>& names);
bool compatible(const Assignment& a, const Assignment& b);

// Work done by factor operations. A null counter pointer disables accounting.
struct CostCounters {
  std::uint64_t entries_written = 0;
  std::uint64_t multiplications = 0;
  std::uint64_t additions = 0;
  std::uint64_t max_live_table = 0;

  void note_table(std::uint64_t size) {
    entries_written += size;
    if (size > max_live_table) max_live_table = size;
  }
  std::uint64_t total() const { return entries_written + multiplications + additions; }
  CostCounters& operator+=(const CostCounters& o);
};

// Dense table over a list of finite variables. Row-major: the first variable
// is the most significant, values enumerate in declared order.
class Factor {
 public:
  Factor() : table_{1.0} {}

  static Factor create(std::vector<VarSpec> vars, std::vector<double> table,
                       CostCounters* counters = nullptr);
  static Factor unit(std::vector<VarSpec> vars, CostCounters* counters = nullptr);

  const std::vector<VarSpec>& vars() const { return vars_; }
  const std::vector<double>& table() const { return table_; }
  std::vector<std::string> names() const;
  std::set<std::string> name_set() const;
  bool has(const std::string& name) const;
  const VarSpec& var(const std::string& name) const;
  std::size_t size() const { return table_.size(); }

  // Every variable of the factor must be bound; extra bindings are ignored.
  double at(const Assignment& a) const;
  std::size_t index_of(const Assignment& a) const;
  Assignment assignment_at(std::size_t index) const;
  double total() const;

  Factor reorder(const std::vector<std::string>& names) const;
  // Restricts to the bound variables' values and drops those variables.
  Factor slice(const Assignment& evidence) const;

 private:
  std::vector<VarSpec> vars_;
  std::vector<double> table_;
};

Factor sum_out(const Factor& f, const std::set<std::string>& names, CostCounters* counters = nullptr);
Factor product(const Factor& a, const Factor& b, CostCounters* counters = nullptr);
Factor product_many(std::span<const Factor> factors, CostCounters* counters = nullptr);
Factor product_many(const std::vector<const Factor*>& factors, CostCounters* counters = nullptr);
Factor normalize(const Factor& f);

// Sums everything except `keep`.
Factor marginal(const Factor& f, const std::set<std::string>& keep, CostCounters* counters = nullptr);

// Compares after aligning variable order. Entries match when
// |a-b| <= abs_tol + rel_tol*max(|a|,|b|).
bool approx_equal(const Factor& a, const Factor& b, double abs_tol, double rel_tol = 0.0);
double max_abs_diff(const Factor& a, const Factor& b);

// Checks that summing out `child` leaves all ones.
void validate_cpt(const Factor& f, const std::string& child, double tol = 1e-9);

}  // namespace bpn
