// Genotype matrix: n individuals x p markers, entries are minor-allele
// counts in {0,1,2}, stored column-major as doubles so marker columns feed
// the fitters directly.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace episcan {

class GenotypeMatrix {
public:
  GenotypeMatrix() = default;
  // Validates entries and computes per-column metadata.
  GenotypeMatrix(std::size_t n, std::size_t p, std::vector<double> data,
                 std::vector<std::string> names = {});

  std::size_t n() const { return n_; }
  std::size_t p() const { return p_; }

  const double* col(std::size_t j) const { return data_.data() + j * n_; }
  double at(std::size_t i, std::size_t j) const { return data_[j * n_ + i]; }

  // Minor-allele frequency: column mean / 2.
  double maf(std::size_t j) const { return maf_[j]; }
  double mean(std::size_t j) const { return 2.0 * maf_[j]; }
  double variance(std::size_t j) const { return var_[j]; }

  const std::vector<std::string>& names() const { return names_; }
  std::string name(std::size_t j) const;

private:
  std::size_t n_ = 0, p_ = 0;
  std::vector<double> data_;
  std::vector<std::string> names_;
  std::vector<double> maf_, var_;
};

}  // namespace episcan
