#pragma once

#include "magpulse/dsp/types.hpp"

#include <span>

namespace magpulse::dsp {

double mean(std::span<const double> x);

/// Product-moment correlation. Throws ConfigError on length mismatch or fewer
/// than two samples, DomainError if either input has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

/// Agreement of paired measurements m_i, v_i. Differences d = m - v; bias and
/// sample SD (divisor n - 1) of d; limits bias +- 1.96 SD. Throws DomainError for n < 2.
BlandAltmanReport bland_altman(std::span<const double> m, std::span<const double> v);

}  // namespace magpulse::dsp
