#include "bpn/factor.hpp"

#include <algorithm>
#include <cmath>

#include "bpn/error.hpp"

namespace bpn {

VarSpec binary_var(const std::string& name) { return VarSpec{name, {"t", "f"}}; }

Assignment project(const Assignment& a, const std::set<std::string>& names) {
  Assignment out;
  for (const auto& k : names) {
    auto it = a.find(k);
    if (it == a.end()) throw Error(ErrorCode::UnknownName, "assignment does not bind " + k);
    out.emplace(k, it->second);
  }
  return out;
}

bool compatible(const Assignment& a, const Assignment& b) {
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it != b.end() && it->second != v) return false;
  }
  return true;
}

CostCounters& CostCounters::operator+=(const CostCounters& o) {
  entries_written += o.entries_written;
  multiplications += o.multiplications;
  additions += o.additions;
  max_live_table = std::max(max_live_table, o.max_live_table);
  return *this;
}

namespace {

std::size_t table_size(const std::vector<VarSpec>& vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n *= v.size();
  return n;
}

std::vector<std::size_t> strides_of(const std::vector<VarSpec>& vars) {
  std::vector<std::size_t> s(vars.size());
  std::size_t acc = 1;
  for (std::size_t i = vars.size(); i-- > 0;) {
    s[i] = acc;
    acc *= vars[i].size();
  }
  return s;
}

void check_vars(const std::vector<VarSpec>& vars) {
  std::set<std::string> seen;
  for (const auto& v : vars) {
    if (!seen.insert(v.name).second) throw Error(ErrorCode::DuplicateVariable, v.name);
    if (v.values.empty()) throw Error(ErrorCode::ValueSetMismatch, v.name + " has no values");
    std::set<std::string> vals(v.values.begin(), v.values.end());
    if (vals.size() != v.values.size()) throw Error(ErrorCode::DuplicateVariable, "repeated value in " + v.name);
  }
}

// Union of variables in first-seen order, checking value sets agree.
std::vector<VarSpec> union_vars(const std::vector<const Factor*>& fs) {
  std::vector<VarSpec> out;
  std::map<std::string, std::size_t> pos;
  for (const Factor* f : fs) {
    for (const auto& v : f->vars()) {
      auto it = pos.find(v.name);
      if (it == pos.end()) {
        pos.emplace(v.name, out.size());
        out.push_back(v);
      } else if (out[it->second].values != v.values) {
        throw Error(ErrorCode::ValueSetMismatch, v.name);
      }
    }
  }
  return out;
}

}  // namespace

Factor Factor::create(std::vector<VarSpec> vars, std::vector<double> table, CostCounters* counters) {
  check_vars(vars);
  if (table.size() != table_size(vars))
    throw Error(ErrorCode::LengthMismatch,
                "expected " + std::to_string(table_size(vars)) + " entries, got " + std::to_string(table.size()));
  for (double x : table)
    if (!(x >= 0.0)) throw Error(ErrorCode::NegativeEntry, "entry " + std::to_string(x));
  Factor f;
  f.vars_ = std::move(vars);
  f.table_ = std::move(table);
  if (counters) counters->note_table(f.table_.size());
  return f;
}

Factor Factor::unit(std::vector<VarSpec> vars, CostCounters* counters) {
  std::size_t n = table_size(vars);
  return create(std::move(vars), std::vector<double>(n, 1.0), counters);
}

std::vector<std::string> Factor::names() const {
  std::vector<std::string> out;
  for (const auto& v : vars_) out.push_back(v.name);
  return out;
}

std::set<std::string> Factor::name_set() const {
  std::set<std::string> out;
  for (const auto& v : vars_) out.insert(v.name);
  return out;
}

bool Factor::has(const std::string& name) const {
  return std::any_of(vars_.begin(), vars_.end(), [&](const VarSpec& v) { return v.name == name; });
}

const VarSpec& Factor::var(const std::string& name) const {
  for (const auto& v : vars_)
    if (v.name == name) return v;
  throw Error(ErrorCode::UnknownName, name);
}

std::size_t Factor::index_of(const Assignment& a) const {
  std::size_t idx = 0;
  for (const auto& v : vars_) {
    auto it = a.find(v.name);
    if (it == a.end()) throw Error(ErrorCode::UnknownName, "unbound variable " + v.name);
    auto vi = std::find(v.values.begin(), v.values.end(), it->second);
    if (vi == v.values.end()) throw Error(ErrorCode::UnknownName, "value " + it->second + " of " + v.name);
    idx = idx * v.size() + static_cast<std::size_t>(vi - v.values.begin());
  }
  return idx;
}

double Factor::at(const Assignment& a) const { return table_[index_of(a)]; }

Assignment Factor::assignment_at(std::size_t index) const {
  Assignment a;
  for (std::size_t i = vars_.size(); i-- > 0;) {
    a[vars_[i].name] = vars_[i].values[index % vars_[i].size()];
    index /= vars_[i].size();
  }
  return a;
}

double Factor::total() const {
  double s = 0;
  for (double x : table_) s += x;
  return s;
}

Factor Factor::reorder(const std::vector<std::string>& names) const {
  if (names.size() != vars_.size()) throw Error(ErrorCode::UnknownName, "reorder needs a permutation");
  std::vector<VarSpec> nv;
  for (const auto& n : names) nv.push_back(var(n));
  check_vars(nv);
  Factor out;
  out.vars_ = nv;
  out.table_.assign(table_.size(), 0.0);
  auto src_strides = strides_of(vars_);
  std::vector<std::size_t> map_stride(nv.size());
  for (std::size_t i = 0; i < nv.size(); ++i)
    for (std::size_t j = 0; j < vars_.size(); ++j)
      if (vars_[j].name == nv[i].name) map_stride[i] = src_strides[j];
  std::vector<std::size_t> digit(nv.size(), 0);
  std::size_t src = 0;
  for (std::size_t k = 0; k < out.table_.size(); ++k) {
    out.table_[k] = table_[src];
    for (std::size_t i = nv.size(); i-- > 0;) {
      if (++digit[i] < nv[i].size()) {
        src += map_stride[i];
        break;
      }
      src -= map_stride[i] * (nv[i].size() - 1);
      digit[i] = 0;
    }
  }
  return out;
}

Factor Factor::slice(const Assignment& evidence) const {
  std::vector<VarSpec> kept;
  for (const auto& v : vars_)
    if (!evidence.count(v.name)) kept.push_back(v);
  for (const auto& [k, val] : evidence) {
    if (!has(k)) continue;
    const auto& vals = var(k).values;
    if (std::find(vals.begin(), vals.end(), val) == vals.end())
      throw Error(ErrorCode::UnknownName, "value " + val + " of " + k);
  }
  Factor out;
  out.vars_ = kept;
  out.table_.assign(table_size(kept), 0.0);
  for (std::size_t k = 0; k < out.table_.size(); ++k) {
    Assignment a = out.assignment_at(k);
    for (const auto& [n, val] : evidence) a[n] = val;
    out.table_[k] = at(a);
  }
  return out;
}

Factor sum_out(const Factor& f, const std::set<std::string>& names, CostCounters* counters) {
  for (const auto& n : names)
    if (!f.has(n)) throw Error(ErrorCode::UnknownName, "cannot sum out " + n);
  std::vector<VarSpec> kept;
  std::size_t removed = 1;
  for (const auto& v : f.vars()) {
    if (names.count(v.name))
      removed *= v.size();
    else
      kept.push_back(v);
  }
  std::vector<double> out(table_size(kept), 0.0);
  // Output stride for each input variable (0 for summed ones).
  std::vector<std::size_t> ostride(f.vars().size(), 0);
  {
    auto ks = strides_of(kept);
    std::size_t j = 0;
    for (std::size_t i = 0; i < f.vars().size(); ++i)
      if (!names.count(f.vars()[i].name)) ostride[i] = ks[j++];
  }
  const auto& vars = f.vars();
  std::vector<std::size_t> digit(vars.size(), 0);
  std::size_t dst = 0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    out[dst] += f.table()[k];
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (++digit[i] < vars[i].size()) {
        dst += ostride[i];
        break;
      }
      dst -= ostride[i] * (vars[i].size() - 1);
      digit[i] = 0;
    }
  }
  if (counters) counters->additions += (removed - 1) * out.size();
  return Factor::create(std::move(kept), std::move(out), counters);
}

Factor product_many(const std::vector<const Factor*>& fs, CostCounters* counters) {
  if (fs.empty()) return Factor::create({}, {1.0}, counters);
  if (fs.size() == 1) return Factor::create(fs[0]->vars(), fs[0]->table(), counters);
  std::vector<VarSpec> vars = union_vars(fs);
  std::size_t n = table_size(vars);
  // Per-factor stride of every result variable.
  std::vector<std::vector<std::size_t>> st(fs.size(), std::vector<std::size_t>(vars.size(), 0));
  for (std::size_t f = 0; f < fs.size(); ++f) {
    auto s = strides_of(fs[f]->vars());
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (std::size_t j = 0; j < fs[f]->vars().size(); ++j)
        if (fs[f]->vars()[j].name == vars[i].name) st[f][i] = s[j];
  }
  std::vector<double> out(n);
  std::vector<std::size_t> off(fs.size(), 0), digit(vars.size(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    double x = fs[0]->table()[off[0]];
    for (std::size_t f = 1; f < fs.size(); ++f) x *= fs[f]->table()[off[f]];
    out[k] = x;
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (++digit[i] < vars[i].size()) {
        for (std::size_t f = 0; f < fs.size(); ++f) off[f] += st[f][i];
        break;
      }
      for (std::size_t f = 0; f < fs.size(); ++f) off[f] -= st[f][i] * (vars[i].size() - 1);
      digit[i] = 0;
    }
  }
  if (counters) counters->multiplications += (fs.size() - 1) * n;
  return Factor::create(std::move(vars), std::move(out), counters);
}

Factor product_many(std::span<const Factor> factors, CostCounters* counters) {
  std::vector<const Factor*> ptrs;
  for (const auto& f : factors) ptrs.push_back(&f);
  return product_many(ptrs, counters);
}

Factor product(const Factor& a, const Factor& b, CostCounters* counters) {
  return product_many(std::vector<const Factor*>{&a, &b}, counters);
}

Factor normalize(const Factor& f) {
  double z = f.total();
  if (!(z > 0.0)) throw Error(ErrorCode::ZeroMass, "cannot normalize a factor with zero mass");
  std::vector<double> t = f.table();
  for (double& x : t) x /= z;
  return Factor::create(f.vars(), std::move(t));
}

Factor marginal(const Factor& f, const std::set<std::string>& keep, CostCounters* counters) {
  std::set<std::string> drop;
  for (const auto& v : f.vars())
    if (!keep.count(v.name)) drop.insert(v.name);
  return sum_out(f, drop, counters);
}

double max_abs_diff(const Factor& a, const Factor& b) {
  if (a.name_set() != b.name_set()) return INFINITY;
  Factor bb = b.reorder(a.names());
  if (bb.vars() != a.vars()) return INFINITY;
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.table()[i] - bb.table()[i]));
  return m;
}

bool approx_equal(const Factor& a, const Factor& b, double abs_tol, double rel_tol) {
  if (a.name_set() != b.name_set()) return false;
  Factor bb = b.reorder(a.names());
  if (bb.vars() != a.vars()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double x = a.table()[i], y = bb.table()[i];
    if (std::fabs(x - y) > abs_tol + rel_tol * std::max(std::fabs(x), std::fabs(y))) return false;
  }
  return true;
}

void validate_cpt(const Factor& f, const std::string& child, double tol) {
  if (!f.has(child)) throw Error(ErrorCode::InvalidCpt, "table does not mention " + child);
  Factor s = sum_out(f, {child});
  for (double x : s.table())
    if (std::fabs(x - 1.0) > tol) throw Error(ErrorCode::InvalidCpt, "rows for " + child + " do not sum to one");
}

}  // namespace bpn
