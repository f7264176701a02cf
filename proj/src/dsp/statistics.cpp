#include "magpulse/dsp/statistics.hpp"

#include "magpulse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace magpulse::dsp {

double mean(std::span<const double> x) {
  if (x.empty()) throw DomainError("mean of an empty sequence");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("pearson: inputs differ in length");
  if (a.size() < 2) throw ConfigError("pearson: need at least two samples");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) throw DomainError("pearson: zero variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

BlandAltmanReport bland_altman(std::span<const double> m, std::span<const double> v) {
  if (m.size() != v.size()) throw ConfigError("bland_altman: inputs differ in length");
  const std::size_t n = m.size();
  if (n < 2) throw DomainError("bland_altman: need at least two pairs");

  std::vector<double> d(n), avg(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = m[i] - v[i];
    avg[i] = 0.5 * (m[i] + v[i]);
  }
  BlandAltmanReport r;
  r.n_points = n;
  r.bias = mean(d);
  double ss = 0.0;
  for (double di : d) ss += (di - r.bias) * (di - r.bias);
  r.sd = std::sqrt(ss / static_cast<double>(n - 1));
  r.loa_lower = r.bias - 1.96 * r.sd;
  r.loa_upper = r.bias + 1.96 * r.sd;

  const double half_width = 1.96 * r.sd;
  const auto within = std::count_if(d.begin(), d.end(),
                                    [&](double di) { return std::abs(di - r.bias) <= half_width; });
  r.pct_within_loa = 100.0 * static_cast<double>(within) / static_cast<double>(n);

  double max_abs = 0.0, sum_abs = 0.0;
  for (double di : d) {
    max_abs = std::max(max_abs, std::abs(di));
    sum_abs += std::abs(di);
  }
  const auto [lo, hi] = std::minmax_element(avg.begin(), avg.end());
  const double span = *hi - *lo;
  if (max_abs == 0.0) {
    r.max_deviation_pct = r.mean_deviation_pct = 0.0;
  } else if (span > 0.0) {
    r.max_deviation_pct = 100.0 * max_abs / span;
    r.mean_deviation_pct = 100.0 * (sum_abs / static_cast<double>(n)) / span;
  } else {
    r.max_deviation_pct = r.mean_deviation_pct = std::numeric_limits<double>::infinity();
  }
  return r;
}

}  // namespace magpulse::dsp
