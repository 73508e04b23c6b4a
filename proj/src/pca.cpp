#include "arena/pca.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "arena/types.hpp"

namespace arena {
namespace {

using Matrix = std::vector<std::vector<double>>;

std::vector<double> mat_vec(const Matrix& m, const std::vector<double>& v) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) s += m[i][j] * v[j];
    out[i] = s;
  }
  return out;
}

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double normalize(std::vector<double>& v) {
  const double n = std::sqrt(vdot(v, v));
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
  return n;
}

// Modified Gram-Schmidt against already-found components.
void orthogonalize(std::vector<double>& v, const Matrix& basis) {
  for (const auto& b : basis) {
    const double p = vdot(v, b);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= p * b[i];
  }
}

std::vector<double> start_vector(std::size_t d, std::size_t component) {
  // fixed, dense and not aligned with any coordinate axis
  std::vector<double> v(d);
  for (std::size_t i = 0; i < d; ++i) {
    v[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i + 1) * (1.0 + 0.618 * static_cast<double>(component)));
  }
  return v;
}

// Smallest-index coordinate axis not spanned by `basis`.
std::vector<double> complete_basis(std::size_t d, const Matrix& basis) {
  for (std::size_t axis = 0; axis < d; ++axis) {
    std::vector<double> e(d, 0.0);
    e[axis] = 1.0;
    orthogonalize(e, basis);
    orthogonalize(e, basis);
    if (normalize(e) > 1e-6) return e;
  }
  return std::vector<double>(d, 0.0);
}

}  // namespace

Matrix covariance(const Matrix& rows, std::vector<double>* mean_out) {
  const std::size_t n = rows.size();
  const std::size_t d = n ? rows.front().size() : 0;
  std::vector<double> mean(d, 0.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  Matrix cov(d, std::vector<double>(d, 0.0));
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < d; ++i) {
      const double ci = r[i] - mean[i];
      for (std::size_t j = i; j < d; ++j) cov[i][j] += ci * (r[j] - mean[j]);
    }
  }
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i][j] /= denom;
      cov[j][i] = cov[i][j];
    }
  }
  if (mean_out) *mean_out = std::move(mean);
  return cov;
}

PcaResult pca_project(const Matrix& vectors, const PcaOptions& options) {
  const std::size_t k = options.k;
  if (k == 0) throw ConfigError("pca: k must be >= 1");
  if (vectors.size() < k + 1) {
    throw ConfigError("pca: need at least " + std::to_string(k + 1) + " vectors, got " +
                      std::to_string(vectors.size()));
  }
  const std::size_t d = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != d) throw ConfigError("pca: vectors have unequal dimensions");
  }
  if (k > d) throw ConfigError("pca: k exceeds the vector dimension");

  PcaResult result;
  Matrix cov = covariance(vectors, &result.mean);

  double scale = 0.0;
  for (std::size_t i = 0; i < d; ++i) scale = std::max(scale, std::abs(cov[i][i]));
  const double zero_threshold = 1e-14 * std::max(scale, 1.0);

  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> v = start_vector(d, c);
    orthogonalize(v, result.components);
    if (normalize(v) == 0.0) v = complete_basis(d, result.components);

    std::size_t it = 0;
    bool degenerate = false;
    for (; it < options.max_iterations; ++it) {
      std::vector<double> w = mat_vec(cov, v);
      orthogonalize(w, result.components);
      const double n = normalize(w);
      if (n <= zero_threshold) {
        degenerate = true;
        break;
      }
      if (vdot(w, v) < 0.0) {
        for (double& x : w) x = -x;
      }
      double change = 0.0;
      for (std::size_t i = 0; i < d; ++i) change = std::max(change, std::abs(w[i] - v[i]));
      v = std::move(w);
      if (change < options.tolerance) {
        ++it;
        break;
      }
    }
    if (degenerate) v = complete_basis(d, result.components);

    const std::vector<double> cv = mat_vec(cov, v);
    // covariance is PSD; clamp rounding noise
    const double lambda = std::max(vdot(v, cv), 0.0);

    // deflate
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) cov[i][j] -= lambda * v[i] * v[j];
    }
    result.components.push_back(std::move(v));
    result.explained_variance.push_back(lambda);
    result.iterations.push_back(it);
  }

  result.projected.reserve(vectors.size());
  for (const auto& row : vectors) {
    std::vector<double> centered(d);
    for (std::size_t j = 0; j < d; ++j) centered[j] = row[j] - result.mean[j];
    std::vector<double> p(k);
    for (std::size_t c = 0; c < k; ++c) p[c] = vdot(centered, result.components[c]);
    result.projected.push_back(std::move(p));
  }
  return result;
}

void write_pca_csv(std::ostream& out, const std::vector<PcaRow>& rows) {
  out << "task_name,predicate,x,y\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(10);
  for (const auto& r : rows) out << r.task_name << ',' << r.predicate << ',' << r.x << ',' << r.y << '\n';
  out.flags(flags);
  out.precision(precision);
}

}  // namespace arena
