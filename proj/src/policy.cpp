#include "qsc/policy.hpp"

namespace qsc {

NumericPolicy& policy() {
  static NumericPolicy p;
  return p;
}

}  // namespace qsc
