#ifndef KCC_DATASET_HPP
#define KCC_DATASET_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace kcc {

// Column-major numeric matrix; the filter statistics work column by column.
class ColMatrix {
 public:
  ColMatrix() = default;
  ColMatrix(int n, int p) : n_(n), p_(p), data_(static_cast<std::size_t>(n) * p, 0.0) {}

  int n() const { return n_; }
  int p() const { return p_; }

  double& at(int i, int j) { return data_[static_cast<std::size_t>(j) * n_ + i]; }
  double at(int i, int j) const { return data_[static_cast<std::size_t>(j) * n_ + i]; }

  std::span<const double> col(int j) const {
    return {data_.data() + static_cast<std::size_t>(j) * n_, static_cast<std::size_t>(n_)};
  }
  std::span<double> col(int j) {
    return {data_.data() + static_cast<std::size_t>(j) * n_, static_cast<std::size_t>(n_)};
  }

  std::span<const double> raw() const { return data_; }

 private:
  int n_ = 0;
  int p_ = 0;
  std::vector<double> data_;
};

struct LabeledDataset {
  ColMatrix x;
  std::vector<int> y;
  std::string provenance;

  int n() const { return x.n(); }
  int p() const { return x.p(); }
};

// CSV with header x1,...,xp,y.
void write_dataset_csv(std::ostream& out, const LabeledDataset& data);
LabeledDataset read_dataset_csv(std::istream& in);

// CSV with header x1,...,xp (covariates only, e.g. knockoff columns).
void write_matrix_csv(std::ostream& out, const ColMatrix& m);
ColMatrix read_matrix_csv(std::istream& in);

// Canonical CSV bytes hashed to a hex string; used for provenance and the
// common-random-numbers check.
std::string dataset_hash(const LabeledDataset& data);

}  // namespace kcc

#endif
