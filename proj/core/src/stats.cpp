#include "sulcdepth/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>

#include "sulcdepth/parallel.hpp"

namespace sulcdepth {
namespace {

std::vector<double> sorted_copy(const std::vector<double>& v) {
  std::vector<double> s = v;
  std::sort(s.begin(), s.end());
  return s;
}

double sample_mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Unbiased (n-1) sample variance.
double sample_variance(const std::vector<double>& v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

// Continued fraction for the regularized incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw DomainError("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta parameters must be positive");
  if (x < 0.0 || x > 1.0) throw DomainError("beta argument must be in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double wasserstein1d(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw EmptyInputError("wasserstein1d needs non-empty samples");
  if (a.size() == b.size()) {
    const std::vector<double> sa = sorted_copy(a), sb = sorted_copy(b);
    double sum = 0.0;
    for (size_t i = 0; i < sa.size(); ++i) sum += std::abs(sa[i] - sb[i]);
    return sum / static_cast<double>(sa.size());
  }
  return wasserstein1d_weighted(a, std::vector<double>(a.size(), 1.0), b,
                                std::vector<double>(b.size(), 1.0));
}

double wasserstein1d_weighted(const std::vector<double>& a, const std::vector<double>& wa,
                              const std::vector<double>& b, const std::vector<double>& wb) {
  if (a.empty() || b.empty()) throw EmptyInputError("wasserstein1d needs non-empty samples");
  if (a.size() != wa.size() || b.size() != wb.size())
    throw DomainError("weights must match samples");

  // Sort each sample, carrying weights, and normalize the weights into
  // quantile breakpoints; integrate |Fa^-1 - Fb^-1| over the merged
  // step-function segments.
  auto prepare = [](const std::vector<double>& v, const std::vector<double>& w,
                    std::vector<double>& values, std::vector<double>& cum) {
    std::vector<size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) { return v[i] < v[j]; });
    double total = 0.0;
    for (double x : w) {
      if (!(x > 0.0)) throw DomainError("weights must be positive");
      total += x;
    }
    values.resize(v.size());
    cum.resize(v.size());
    double running = 0.0;
    for (size_t k = 0; k < idx.size(); ++k) {
      values[k] = v[idx[k]];
      running += w[idx[k]] / total;
      cum[k] = running;
    }
    cum.back() = 1.0;  // guard against round-off
  };
  std::vector<double> va, ca, vb, cb;
  prepare(a, wa, va, ca);
  prepare(b, wb, vb, cb);

  double distance = 0.0;
  double q_prev = 0.0;
  size_t ia = 0, ib = 0;
  while (ia < va.size() && ib < vb.size()) {
    const double q = std::min(ca[ia], cb[ib]);
    distance += (q - q_prev) * std::abs(va[ia] - vb[ib]);
    if (ca[ia] <= q) ++ia;
    if (cb[ib] <= q) ++ib;
    q_prev = q;
  }
  return distance;
}

double ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw EmptyInputError("ks_two_sample needs non-empty samples");
  const std::vector<double> sa = sorted_copy(a), sb = sorted_copy(b);
  const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
  size_t ia = 0, ib = 0;
  double best = 0.0;
  while (ia < sa.size() && ib < sb.size()) {
    const double x = std::min(sa[ia], sb[ib]);
    while (ia < sa.size() && sa[ia] <= x) ++ia;
    while (ib < sb.size() && sb[ib] <= x) ++ib;
    best = std::max(best, std::abs(ia / na - ib / nb));
  }
  return best;
}

WelchResult welch_ttest(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) throw DomainError("welch_ttest needs >= 2 points per sample");
  const double ma = sample_mean(a), mb = sample_mean(b);
  const double va = sample_variance(a, ma), vb = sample_variance(b, mb);
  if (va == 0.0 && vb == 0.0) {
    if (ma == mb) return {0.0, static_cast<double>(a.size() + b.size() - 2), 1.0};
    throw DegenerateError("both samples have zero variance with different means");
  }
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double sa = va / na, sb = vb / nb;
  const double se2 = sa + sb;
  WelchResult result;
  result.t = (ma - mb) / std::sqrt(se2);
  result.df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  // Two-sided p via the t CDF: P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2).
  const double x = result.df / (result.df + result.t * result.t);
  result.p = regularized_incomplete_beta(result.df / 2.0, 0.5, x);
  return result;
}

RegressionResult linear_regression(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("x and y must have the same length");
  if (x.size() < 2) throw DegenerateError("regression needs at least 2 points");
  const double mx = sample_mean(x), my = sample_mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateError("x has zero variance");
  RegressionResult result;
  result.slope = sxy / sxx;
  result.intercept = my - result.slope * mx;
  result.r = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  result.residuals.resize(static_cast<int>(x.size()));
  for (size_t i = 0; i < x.size(); ++i)
    result.residuals(static_cast<int>(i)) = y[i] - (result.slope * x[i] + result.intercept);
  return result;
}

DistanceMatrix distance_matrix(const std::vector<DepthMap>& maps,
                               const std::vector<std::string>& ids, const std::string& method) {
  if (maps.size() < 2) throw DomainError("distance_matrix needs at least 2 maps");
  if (!ids.empty() && ids.size() != maps.size())
    throw DomainError("ids must match maps in size");
  const int n = static_cast<int>(maps.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return maps[i].characteristic_length < maps[j].characteristic_length;
  });

  DistanceMatrix out;
  out.method = method;
  out.distances = Eigen::MatrixXd::Zero(n, n);
  out.ids.reserve(n);
  out.lengths.reserve(n);
  std::vector<std::vector<double>> samples(n);
  for (int k = 0; k < n; ++k) {
    const DepthMap& map = maps[order[k]];
    out.ids.push_back(ids.empty() ? "subject_" + std::to_string(order[k]) : ids[order[k]]);
    out.lengths.push_back(map.characteristic_length);
    samples[k].assign(map.values.values.data(),
                      map.values.values.data() + map.values.values.size());
  }

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<double> values(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), [&](int k) {
    values[k] = wasserstein1d(samples[pairs[k].first], samples[pairs[k].second]);
  });
  for (size_t k = 0; k < pairs.size(); ++k) {
    out.distances(pairs[k].first, pairs[k].second) = values[k];
    out.distances(pairs[k].second, pairs[k].first) = values[k];
  }
  return out;
}

std::vector<double> subgroup_ks_profile(const DistanceMatrix& matrix, int window, int n_windows) {
  const int n = static_cast<int>(matrix.distances.rows());
  if (window < 2) throw DomainError("window must cover at least 2 subjects");
  if (window > n) throw DomainError("window larger than population");
  if (n_windows < 1) throw DomainError("need at least one window");

  auto within = [&](int start) {
    std::vector<double> values;
    values.reserve(static_cast<size_t>(window) * (window - 1) / 2);
    for (int i = start; i < start + window; ++i)
      for (int j = i + 1; j < start + window; ++j) values.push_back(matrix.distances(i, j));
    return values;
  };
  const std::vector<double> reference = within(n - window);

  std::vector<double> profile;
  profile.reserve(n_windows);
  for (int w = 0; w < n_windows; ++w) {
    const int start =
        n_windows == 1
            ? n - window
            : static_cast<int>(std::lround(static_cast<double>(w) * (n - window) / (n_windows - 1)));
    profile.push_back(ks_two_sample(within(start), reference));
  }
  return profile;
}

void save_distance_matrix(const DistanceMatrix& matrix, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "subject";
  for (const auto& id : matrix.ids) out << ',' << id;
  out << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int i = 0; i < matrix.distances.rows(); ++i) {
    out << matrix.ids[i];
    for (int j = 0; j < matrix.distances.cols(); ++j) out << ',' << matrix.distances(i, j);
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace sulcdepth
