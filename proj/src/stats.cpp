#include "spivc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spivc {

double otsu_threshold(const std::vector<double>& values) {
  if (values.empty())
    throw std::invalid_argument("otsu: empty input");
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo))
    throw std::invalid_argument("otsu: constant input has no threshold");

  constexpr int kBins = 256;
  std::vector<int> hist(kBins, 0);
  for (double v : values) {
    int b = int((v - lo) / (hi - lo) * kBins);
    hist[std::min(b, kBins - 1)]++;
  }

  // Between-class variance w0*w1*(mu0-mu1)^2, maximized over the split
  // "bins <= t are the lower class"; first maximizer wins.
  double total = double(values.size());
  double total_sum = 0.0;
  for (int b = 0; b < kBins; ++b) total_sum += double(b) * hist[b];

  double w0 = 0.0, sum0 = 0.0, best = -1.0;
  int best_t = -1;
  for (int t = 0; t < kBins - 1; ++t) {
    w0 += hist[t];
    sum0 += double(t) * hist[t];
    if (w0 == 0.0) continue;
    double w1 = total - w0;
    if (w1 == 0.0) break;
    double mu0 = sum0 / w0;
    double mu1 = (total_sum - sum0) / w1;
    double score = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (score > best) {
      best = score;
      best_t = t;
    }
  }
  if (best_t < 0 || best <= 0.0)  // single occupied bin: nothing to separate
    return lo + (hi - lo) / 2.0;
  // Threshold at the upper edge of the winning bin.
  return lo + (hi - lo) * double(best_t + 1) / kBins;
}

}  // namespace spivc
