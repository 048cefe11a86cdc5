#include "qwcage/common.hpp"

#include <algorithm>
#include <limits>

namespace qwcage {

double circular_multiset_distance(std::vector<double> a, std::vector<double> b) {
  require(a.size() == b.size(), "circular_multiset_distance: size mismatch");
  const int n = int(a.size());
  if (n == 0) return 0.0;
  for (double& x : a) x = reduce_angle(x);
  for (double& x : b) x = reduce_angle(x);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  // The optimal matching of two sorted circular sequences is order
  // preserving up to a cyclic shift.
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n; ++s) {
    double worst = 0.0;
    for (int j = 0; j < n && worst < best; ++j)
      worst = std::max(worst, circ_dist(a[j], b[(j + s) % n]));
    best = std::min(best, worst);
  }
  return best;
}

double circular_diameter(std::vector<double> values) {
  if (values.size() <= 1) return 0.0;
  for (double& x : values) x = reduce_angle(x);
  std::sort(values.begin(), values.end());
  double max_gap = kTwoPi - (values.back() - values.front());
  for (size_t i = 1; i < values.size(); ++i)
    max_gap = std::max(max_gap, values[i] - values[i - 1]);
  return kTwoPi - max_gap;
}

}  // namespace qwcage
