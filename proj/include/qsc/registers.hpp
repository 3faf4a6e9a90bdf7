#pragma once

#include <string>
#include <vector>

// Labeled tensor-product index spaces.
//
// A register space is an ordered list of named registers with dimensions
// >= 2. The canonical basis of the composite space is row-major over the
// registers in declaration order: the global index of a basis vector is
//   g = sum_k i_k * stride_k,   stride_k = prod_{j>k} dim_j.
// An IndexMap splits the global index across a chosen subset S of registers
// (taken in the caller's order, which need not be canonical):
//   g = sub_off[s] + rest_off[r]
// where s enumerates the subset multi-index row-major in the caller's order
// and r enumerates the remaining registers row-major in canonical order.
// The split is exact because strides add.

namespace qsc {

struct Register {
  std::string name;
  int dim = 0;
};

class RegisterSpace {
 public:
  RegisterSpace() = default;
  explicit RegisterSpace(std::vector<Register> regs, int dim_cap = 0);

  int count() const { return static_cast<int>(regs_.size()); }
  int total_dim() const { return total_; }
  int cap() const { return cap_; }
  const Register& at(int i) const { return regs_[i]; }
  const std::vector<Register>& registers() const { return regs_; }

  bool has(const std::string& name) const;
  int position(const std::string& name) const;  // throws when absent
  int dim_of(const std::string& name) const;

  std::vector<std::string> names() const;

  // New space with the named registers in the caller's order.
  RegisterSpace subset(const std::vector<std::string>& names) const;
  // New space without the named registers, canonical order preserved.
  RegisterSpace without(const std::vector<std::string>& names) const;
  // New space with extra registers appended after the existing ones.
  RegisterSpace appended(const std::vector<Register>& extra) const;

  bool same_layout(const RegisterSpace& other) const;

 private:
  std::vector<Register> regs_;
  int total_ = 1;
  int cap_ = 0;
};

struct IndexMap {
  int sub_dim = 1;
  int rest_dim = 1;
  std::vector<int> sub_off;
  std::vector<int> rest_off;

  int global(int s, int r) const { return sub_off[s] + rest_off[r]; }
};

// Split of `space` across `sub_names` (caller's order) and the rest.
IndexMap make_index_map(const RegisterSpace& space,
                        const std::vector<std::string>& sub_names);

}  // namespace qsc
