#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace arena {

struct PcaOptions {
  std::size_t k = 2;
  double tolerance = 1e-9;
  std::size_t max_iterations = 10000;
};

struct PcaResult {
  /// k rows of length d, orthonormal.
  std::vector<std::vector<double>> components;
  /// n rows of length k: mean-centered inputs projected onto components.
  std::vector<std::vector<double>> projected;
  /// Sample variance along each component, non-increasing.
  std::vector<double> explained_variance;
  std::vector<double> mean;
  /// Power iterations spent per component.
  std::vector<std::size_t> iterations;
};

/// Sample covariance (divides by n - 1) of row vectors.
std::vector<std::vector<double>> covariance(const std::vector<std::vector<double>>& rows,
                                            std::vector<double>* mean_out = nullptr);

/// Top-k principal components by power iteration with deflation.
///
/// Each component starts from a fixed deterministic vector, is kept
/// orthogonal to the components already found, and iterates v <- Cv/|Cv|
/// until the sign-aligned change drops below `tolerance`. The eigenvalue is
/// the Rayleigh quotient; the matrix is then deflated by lambda * v v^T.
/// When the deflated matrix is numerically zero the component is completed to
/// an orthonormal basis with explained variance 0.
///
/// Throws ConfigError when fewer than k + 1 vectors are given, rows have
/// unequal length, or k exceeds the dimension.
PcaResult pca_project(const std::vector<std::vector<double>>& vectors, const PcaOptions& options = {});

struct PcaRow {
  std::string task_name;
  std::string predicate;
  double x = 0.0;
  double y = 0.0;
};

/// CSV with header "task_name,predicate,x,y".
void write_pca_csv(std::ostream& out, const std::vector<PcaRow>& rows);

}  // namespace arena
