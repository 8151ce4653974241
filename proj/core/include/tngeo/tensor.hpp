#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tngeo/common.hpp"

namespace tngeo {

// Dense complex tensor with named indices, row-major over dims.
// Values are immutable by convention once built: every operation returns a
// new tensor, so instances are safe to share between threads.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<std::size_t> dims, std::vector<std::string> labels);
  Tensor(std::vector<std::size_t> dims, std::vector<std::string> labels,
         std::vector<cplx> data);

  static Tensor scalar(cplx value);

  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t dim(const std::string& label) const { return dims_.at(axis_of(label)); }
  std::size_t axis_of(const std::string& label) const;
  bool has_label(const std::string& label) const;

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& mutable_data() { return data_; }

  cplx& at(const std::vector<std::size_t>& idx);
  const cplx& at(const std::vector<std::size_t>& idx) const;
  std::size_t flat_index(const std::vector<std::size_t>& idx) const;

  Tensor permuted(const std::vector<std::string>& new_label_order) const;
  Tensor relabeled(const std::vector<std::string>& new_labels) const;
  // rename a single index, keeping axis order
  Tensor renamed(const std::string& from, const std::string& to) const;
  Tensor conjugated() const;
  Tensor scaled(cplx factor) const;

  double norm() const;       // Frobenius
  double max_abs() const;
  bool all_finite() const;
  void check_finite(const char* where) const;

 private:
  void init_strides();
  std::vector<std::size_t> dims_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> strides_;
  std::vector<cplx> data_;
};

// Pairwise contraction over label pairs (label_in_a, label_in_b).
// Result carries the uncontracted labels of a, then those of b.
Tensor contract(const Tensor& a, const Tensor& b,
                const std::vector<std::pair<std::string, std::string>>& pairs);

// Sum over one repeated pair of axes within a single tensor.
Tensor trace_pair(const Tensor& t, const std::string& la, const std::string& lb);

}  // namespace tngeo
