#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

// Small statistics toolkit used by the test harnesses and the CLI reports:
// deterministic (pairwise) summation, chi-square and Kolmogorov-Smirnov
// p-values, and the Monte Carlo estimate record.

namespace sbdp {

//============================================================
// Deterministic summation
//============================================================

/// Pairwise sum; the reduction tree depends only on the element order,
/// so results are identical for any worker count.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // sample variance (n-1 denominator)
  std::size_t n = 0;
};

/// Two-pass mean/variance with pairwise accumulation.
inline MeanVar mean_variance(std::span<const double> xs) {
  MeanVar r;
  r.n = xs.size();
  if (r.n == 0) return r;
  r.mean = pairwise_sum(xs) / static_cast<double>(r.n);
  if (r.n < 2) {
    r.variance = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - r.mean;
    sq[i] = d * d;
  }
  r.variance = pairwise_sum(sq) / static_cast<double>(r.n - 1);
  return r;
}

//============================================================
// Monte Carlo estimate record
//============================================================

/// Point estimate with its standard error. `std_error` is NaN when runs < 2
/// (flagged as undefined by the report writers). `extra` carries auxiliary
/// diagnostics such as truncation-bias bounds.
struct MCEstimate {
  double mean = 0.0;
  double std_error = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t runs = 0;
  std::map<std::string, double> extra;

  bool se_defined() const { return std::isfinite(std_error); }
};

inline MCEstimate mc_estimate_from(std::span<const double> per_run) {
  const MeanVar mv = mean_variance(per_run);
  MCEstimate e;
  e.mean = mv.mean;
  e.runs = mv.n;
  if (mv.n >= 2)
    e.std_error = std::sqrt(mv.variance / static_cast<double>(mv.n));
  return e;
}

//============================================================
// Distributions
//============================================================

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Upper tail P(X >= stat) for a chi-square with `dof` degrees of freedom.
inline double chi_square_pvalue(double stat, double dof) {
  if (stat <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

/// Asymptotic Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} e^{-2k^2 lambda^2}.
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-16 * std::abs(sum)) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// One-sample Kolmogorov-Smirnov test of `samples` against a continuous CDF.
/// Returns the asymptotic p-value (Stephens' small-sample correction).
inline double ks_test_pvalue(std::vector<double> samples,
                             const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_test: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::abs(f - lo), std::abs(f - hi)});
  }
  const double sn = std::sqrt(n);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

//============================================================
// Chi-square tests on binned counts
//============================================================

/// Goodness of fit of observed counts against cell probabilities.
/// Cells are used as given; caller is responsible for sensible binning.
inline double chi_square_gof_pvalue(std::span<const std::uint64_t> observed,
                                    std::span<const double> prob) {
  if (observed.size() != prob.size() || observed.empty())
    throw std::invalid_argument("chi_square_gof: size mismatch");
  double total = 0.0;
  for (auto c : observed) total += static_cast<double>(c);
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * prob[i];
    if (e <= 0.0) throw std::invalid_argument("chi_square_gof: zero expected cell");
    const double d = static_cast<double>(observed[i]) - e;
    stat += d * d / e;
  }
  return chi_square_pvalue(stat, static_cast<double>(observed.size() - 1));
}

/// Two-sample chi-square homogeneity test on two histograms over the same
/// binning. Bins with small pooled counts are merged into the last kept bin
/// so every expected cell count is at least `min_expected`.
inline double chi_square_two_sample_pvalue(std::span<const std::uint64_t> h1,
                                           std::span<const std::uint64_t> h2,
                                           double min_expected = 5.0) {
  if (h1.size() != h2.size() || h1.empty())
    throw std::invalid_argument("chi_square_two_sample: size mismatch");
  std::vector<double> a, b;
  double accA = 0.0, accB = 0.0;
  for (std::size_t i = 0; i < h1.size(); ++i) {
    accA += static_cast<double>(h1[i]);
    accB += static_cast<double>(h2[i]);
    if (accA + accB >= 2.0 * min_expected) {
      a.push_back(accA);
      b.push_back(accB);
      accA = accB = 0.0;
    }
  }
  if (accA + accB > 0.0) {
    if (a.empty()) {
      a.push_back(accA);
      b.push_back(accB);
    } else {
      a.back() += accA;
      b.back() += accB;
    }
  }
  if (a.size() < 2) return 1.0;  // everything in one bin: nothing to compare
  const double nA = pairwise_sum(a), nB = pairwise_sum(b);
  if (nA == 0.0 || nB == 0.0)
    throw std::invalid_argument("chi_square_two_sample: empty sample");
  double stat = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double pooled = (a[i] + b[i]) / (nA + nB);
    const double eA = nA * pooled, eB = nB * pooled;
    if (eA > 0.0) stat += (a[i] - eA) * (a[i] - eA) / eA;
    if (eB > 0.0) stat += (b[i] - eB) * (b[i] - eB) / eB;
  }
  return chi_square_pvalue(stat, static_cast<double>(a.size() - 1));
}

}  // namespace sbdp
