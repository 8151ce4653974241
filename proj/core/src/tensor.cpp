#include "tngeo/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tngeo {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) p *= d;
  return p;
}

void validate_shape(const std::vector<std::size_t>& dims,
                    const std::vector<std::string>& labels) {
  if (dims.size() != labels.size())
    throw config_error("tensor: dims/labels size mismatch");
  for (std::size_t d : dims)
    if (d == 0) throw config_error("tensor: zero dimension");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size())
    throw config_error("tensor: duplicate index label");
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  validate_shape(dims_, labels_);
  data_.assign(product(dims_), cplx(0.0, 0.0));
  init_strides();
}

Tensor::Tensor(std::vector<std::size_t> dims, std::vector<std::string> labels,
               std::vector<cplx> data)
    : dims_(std::move(dims)), labels_(std::move(labels)), data_(std::move(data)) {
  validate_shape(dims_, labels_);
  if (data_.size() != product(dims_))
    throw config_error("tensor: data size does not match dims");
  init_strides();
}

Tensor Tensor::scalar(cplx value) {
  Tensor t;
  t.data_ = {value};
  return t;
}

void Tensor::init_strides() {
  strides_.assign(dims_.size(), 1);
  for (std::size_t i = dims_.size(); i-- > 1;)
    strides_[i - 1] = strides_[i] * dims_[i];
}

std::size_t Tensor::axis_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  throw config_error("tensor: unknown index label '" + label + "'");
}

bool Tensor::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t Tensor::flat_index(const std::vector<std::size_t>& idx) const {
  if (idx.size() != dims_.size())
    throw config_error("tensor: index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= dims_[i]) throw config_error("tensor: index out of range");
    flat += idx[i] * strides_[i];
  }
  return flat;
}

cplx& Tensor::at(const std::vector<std::size_t>& idx) { return data_[flat_index(idx)]; }
const cplx& Tensor::at(const std::vector<std::size_t>& idx) const {
  return data_[flat_index(idx)];
}

Tensor Tensor::permuted(const std::vector<std::string>& new_label_order) const {
  if (new_label_order.size() != labels_.size())
    throw config_error("tensor: permutation must mention every label once");
  std::vector<std::size_t> axes(new_label_order.size());
  std::vector<std::size_t> new_dims(new_label_order.size());
  for (std::size_t i = 0; i < new_label_order.size(); ++i) {
    axes[i] = axis_of(new_label_order[i]);
    new_dims[i] = dims_[axes[i]];
  }
  std::set<std::size_t> unique_axes(axes.begin(), axes.end());
  if (unique_axes.size() != axes.size())
    throw config_error("tensor: repeated label in permutation");

  Tensor out(new_dims, new_label_order);
  const std::size_t n = data_.size();
  const std::size_t r = dims_.size();
  // walk output indices in row-major order, pull from input
  std::vector<std::size_t> out_idx(r, 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t src = 0;
    for (std::size_t i = 0; i < r; ++i) src += out_idx[i] * strides_[axes[i]];
    out.data_[flat] = data_[src];
    for (std::size_t i = r; i-- > 0;) {
      if (++out_idx[i] < new_dims[i]) break;
      out_idx[i] = 0;
    }
  }
  return out;
}

Tensor Tensor::relabeled(const std::vector<std::string>& new_labels) const {
  Tensor t = *this;
  if (new_labels.size() != labels_.size())
    throw config_error("tensor: relabel rank mismatch");
  t.labels_ = new_labels;
  validate_shape(t.dims_, t.labels_);
  return t;
}

Tensor Tensor::renamed(const std::string& from, const std::string& to) const {
  std::vector<std::string> labels = labels_;
  labels[axis_of(from)] = to;
  return relabeled(labels);
}

Tensor Tensor::conjugated() const {
  Tensor t = *this;
  for (cplx& v : t.data_) v = std::conj(v);
  return t;
}

Tensor Tensor::scaled(cplx factor) const {
  Tensor t = *this;
  for (cplx& v : t.data_) v *= factor;
  return t;
}

double Tensor::norm() const {
  double s = 0.0;
  for (const cplx& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool Tensor::all_finite() const {
  for (const cplx& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

void Tensor::check_finite(const char* where) const {
  if (!all_finite())
    throw numeric_error(std::string("non-finite tensor entries after ") + where);
}

Tensor contract(const Tensor& a, const Tensor& b,
                const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::size_t> a_caxes, b_caxes;
  a_caxes.reserve(pairs.size());
  b_caxes.reserve(pairs.size());
  for (const auto& [la, lb] : pairs) {
    const std::size_t ax = a.axis_of(la);
    const std::size_t bx = b.axis_of(lb);
    if (a.dims()[ax] != b.dims()[bx])
      throw config_error("contract: dimension mismatch on pair (" + la + "," + lb + ")");
    a_caxes.push_back(ax);
    b_caxes.push_back(bx);
  }
  {
    std::set<std::size_t> ua(a_caxes.begin(), a_caxes.end());
    std::set<std::size_t> ub(b_caxes.begin(), b_caxes.end());
    if (ua.size() != a_caxes.size() || ub.size() != b_caxes.size())
      throw config_error("contract: index contracted twice");
  }

  std::vector<std::string> a_free, b_free, a_order, b_order;
  std::vector<std::size_t> out_dims;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (std::find(a_caxes.begin(), a_caxes.end(), i) == a_caxes.end()) {
      a_free.push_back(a.labels()[i]);
      out_dims.push_back(a.dims()[i]);
    }
  for (std::size_t i = 0; i < b.rank(); ++i)
    if (std::find(b_caxes.begin(), b_caxes.end(), i) == b_caxes.end()) {
      b_free.push_back(b.labels()[i]);
      out_dims.push_back(b.dims()[i]);
    }

  std::vector<std::string> out_labels = a_free;
  out_labels.insert(out_labels.end(), b_free.begin(), b_free.end());
  {
    std::set<std::string> seen(out_labels.begin(), out_labels.end());
    if (seen.size() != out_labels.size())
      throw config_error("contract: duplicate label in result; rename first");
  }

  a_order = a_free;
  for (const auto& p : pairs) a_order.push_back(p.first);
  b_order.clear();
  for (const auto& p : pairs) b_order.push_back(p.second);
  b_order.insert(b_order.end(), b_free.begin(), b_free.end());

  const Tensor ap = a.permuted(a_order);
  const Tensor bp = b.permuted(b_order);

  std::size_t m = 1, k = 1, n = 1;
  for (const auto& l : a_free) m *= a.dim(l);
  for (const auto& p : pairs) k *= a.dim(p.first);
  for (const auto& l : b_free) n *= b.dim(l);

  std::vector<cplx> out(m * n, cplx(0.0, 0.0));
  const cplx* pa = ap.data().data();
  const cplx* pb = bp.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t kk = 0; kk < k; ++kk) {
      const cplx aik = pa[i * k + kk];
      if (aik == cplx(0.0, 0.0)) continue;
      const cplx* brow = pb + kk * n;
      cplx* orow = out.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
  }

  if (out_dims.empty()) {
    Tensor t = Tensor::scalar(out[0]);
    t.check_finite("contract");
    return t;
  }
  Tensor t(out_dims, out_labels, std::move(out));
  t.check_finite("contract");
  return t;
}

Tensor trace_pair(const Tensor& t, const std::string& la, const std::string& lb) {
  const std::size_t ax = t.axis_of(la);
  const std::size_t bx = t.axis_of(lb);
  if (t.dims()[ax] != t.dims()[bx])
    throw config_error("trace: dimension mismatch");
  std::vector<std::string> keep;
  std::vector<std::size_t> keep_dims;
  for (std::size_t i = 0; i < t.rank(); ++i)
    if (i != ax && i != bx) {
      keep.push_back(t.labels()[i]);
      keep_dims.push_back(t.dims()[i]);
    }
  std::vector<std::string> order = keep;
  order.push_back(la);
  order.push_back(lb);
  const Tensor p = t.permuted(order);
  const std::size_t d = t.dims()[ax];
  std::size_t m = 1;
  for (std::size_t kd : keep_dims) m *= kd;
  std::vector<cplx> out(std::max<std::size_t>(m, 1), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    cplx s(0.0, 0.0);
    for (std::size_t j = 0; j < d; ++j) s += p.data()[i * d * d + j * d + j];
    out[i] = s;
  }
  if (keep.empty()) return Tensor::scalar(out[0]);
  return Tensor(keep_dims, keep, std::move(out));
}

}  // namespace tngeo
