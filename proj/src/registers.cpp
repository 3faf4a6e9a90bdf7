#include "qsc/registers.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "qsc/policy.hpp"

namespace qsc {

RegisterSpace::RegisterSpace(std::vector<Register> regs, int dim_cap)
    : regs_(std::move(regs)) {
  cap_ = (dim_cap > 0) ? dim_cap : policy().dimension_cap;
  std::set<std::string> seen;
  long long total = 1;
  for (const Register& r : regs_) {
    if (r.name.empty())
      throw std::invalid_argument("register space: empty register name");
    if (r.dim < 2)
      throw std::invalid_argument("register space: register '" + r.name +
                                  "' has dimension < 2");
    if (!seen.insert(r.name).second)
      throw std::invalid_argument("register space: duplicate register '" +
                                  r.name + "'");
    total *= r.dim;
    if (total > cap_)
      throw std::invalid_argument(
          "register space: total dimension exceeds cap " +
          std::to_string(cap_));
  }
  total_ = static_cast<int>(total);
}

bool RegisterSpace::has(const std::string& name) const {
  for (const Register& r : regs_)
    if (r.name == name) return true;
  return false;
}

int RegisterSpace::position(const std::string& name) const {
  for (int i = 0; i < count(); ++i)
    if (regs_[i].name == name) return i;
  throw std::invalid_argument("register space: no register named '" + name +
                              "'");
}

int RegisterSpace::dim_of(const std::string& name) const {
  return regs_[position(name)].dim;
}

std::vector<std::string> RegisterSpace::names() const {
  std::vector<std::string> out;
  out.reserve(regs_.size());
  for (const Register& r : regs_) out.push_back(r.name);
  return out;
}

RegisterSpace RegisterSpace::subset(
    const std::vector<std::string>& names) const {
  std::vector<Register> picked;
  picked.reserve(names.size());
  for (const std::string& n : names) picked.push_back(regs_[position(n)]);
  return RegisterSpace(std::move(picked), cap_);
}

RegisterSpace RegisterSpace::without(
    const std::vector<std::string>& names) const {
  for (const std::string& n : names) position(n);  // existence check
  std::vector<Register> kept;
  for (const Register& r : regs_)
    if (std::find(names.begin(), names.end(), r.name) == names.end())
      kept.push_back(r);
  return RegisterSpace(std::move(kept), cap_);
}

RegisterSpace RegisterSpace::appended(
    const std::vector<Register>& extra) const {
  std::vector<Register> all = regs_;
  all.insert(all.end(), extra.begin(), extra.end());
  return RegisterSpace(std::move(all), cap_);
}

bool RegisterSpace::same_layout(const RegisterSpace& other) const {
  if (count() != other.count()) return false;
  for (int i = 0; i < count(); ++i)
    if (regs_[i].name != other.regs_[i].name ||
        regs_[i].dim != other.regs_[i].dim)
      return false;
  return true;
}

IndexMap make_index_map(const RegisterSpace& space,
                        const std::vector<std::string>& sub_names) {
  int n = space.count();
  std::vector<int> stride(n, 1);
  for (int k = n - 2; k >= 0; --k)
    stride[k] = stride[k + 1] * space.at(k + 1).dim;

  std::vector<int> sub_pos;
  std::vector<bool> in_sub(n, false);
  for (const std::string& name : sub_names) {
    int p = space.position(name);
    if (in_sub[p])
      throw std::invalid_argument("index map: register '" + name +
                                  "' listed twice");
    in_sub[p] = true;
    sub_pos.push_back(p);
  }
  std::vector<int> rest_pos;
  for (int k = 0; k < n; ++k)
    if (!in_sub[k]) rest_pos.push_back(k);

  auto offsets = [&](const std::vector<int>& pos) {
    int dim = 1;
    for (int p : pos) dim *= space.at(p).dim;
    std::vector<int> off(dim, 0);
    for (int idx = 0; idx < dim; ++idx) {
      int rem = idx, o = 0;
      for (int j = static_cast<int>(pos.size()) - 1; j >= 0; --j) {
        int d = space.at(pos[j]).dim;
        o += (rem % d) * stride[pos[j]];
        rem /= d;
      }
      off[idx] = o;
    }
    return off;
  };

  IndexMap m;
  m.sub_off = offsets(sub_pos);
  m.rest_off = offsets(rest_pos);
  m.sub_dim = static_cast<int>(m.sub_off.size());
  m.rest_dim = static_cast<int>(m.rest_off.size());
  return m;
}

}  // namespace qsc
