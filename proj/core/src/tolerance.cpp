#include "qil/tolerance.hpp"

#include <algorithm>
#include <stdexcept>

#include "qil/defect.hpp"

namespace qil {

double ToleranceProfile::scale(const OperatorMatrix& t, int m, int n) const {
  if (m < 0 || n < 0) throw std::invalid_argument("ToleranceProfile::scale: negative order");
  OperatorMatrix power = matpow(t, n);
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double nrm = op_norm(power);
    sum += static_cast<double>(binomial(m, k)) * nrm * nrm;
    if (k < m) power = t * power;
  }
  return std::max(1.0, sum);
}

}  // namespace qil
