#include "episcan/genotype.hpp"

#include <cstdio>

#include "episcan/errors.hpp"
#include "episcan/kernels.hpp"

namespace episcan {

GenotypeMatrix::GenotypeMatrix(std::size_t n, std::size_t p,
                               std::vector<double> data,
                               std::vector<std::string> names)
    : n_(n), p_(p), data_(std::move(data)), names_(std::move(names)) {
  if (n_ == 0 || p_ == 0)
    throw_error(ErrorCode::InvalidInput, "genotype matrix must be non-empty");
  if (data_.size() != n_ * p_)
    throw_error(ErrorCode::InvalidInput, "genotype matrix size mismatch");
  if (!names_.empty() && names_.size() != p_)
    throw_error(ErrorCode::InvalidInput, "genotype names: one per marker");

  for (std::size_t j = 0; j < p_; ++j) {
    const double* c = col(j);
    for (std::size_t i = 0; i < n_; ++i) {
      double v = c[i];
      if (v != 0.0 && v != 1.0 && v != 2.0) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "genotype entry at row %zu, column %zu is %g (want 0/1/2)",
                      i, j, v);
        throw_error(ErrorCode::InvalidInput, buf);
      }
    }
  }

  maf_.resize(p_);
  var_.resize(p_);
  for (std::size_t j = 0; j < p_; ++j) {
    const double* c = col(j);
    double mean = kernels::sum(c, n_) / static_cast<double>(n_);
    maf_[j] = 0.5 * mean;
    double ssq = kernels::dot(c, c, n_);
    // population variance; only used for quality screening
    var_[j] = ssq / static_cast<double>(n_) - mean * mean;
  }
}

std::string GenotypeMatrix::name(std::size_t j) const {
  if (!names_.empty()) return names_[j];
  return "m" + std::to_string(j);
}

}  // namespace episcan
