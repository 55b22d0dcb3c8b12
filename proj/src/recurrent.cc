#include "vne/recurrent.h"

#include <stdexcept>
#include <utility>

namespace vne {

namespace {

// grads[w] += d xᵀ ; grads[b] += d
void accumulate_outer(Parameters& grads, const std::string& w,
                      const std::string& b, std::span<const double> d,
                      std::span<const double> x) {
  Matrix& gw = grads.at(w);
  Matrix& gb = grads.at(b);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) continue;
    auto row = gw.row(i);
    for (std::size_t j = 0; j < x.size(); ++j) row[j] += d[i] * x[j];
    gb(i, 0) += d[i];
  }
}

}  // namespace

CellType parse_cell_type(const std::string& text) {
  if (text == "gru") return CellType::kGru;
  if (text == "elman") return CellType::kElman;
  throw std::invalid_argument("unknown recurrent cell type '" + text + "'");
}

RecurrentCell::RecurrentCell(CellType type, std::string prefix,
                             std::size_t input, std::size_t hidden)
    : type_(type), prefix_(std::move(prefix)), input_(input), hidden_(hidden) {}

void RecurrentCell::declare(Parameters& params) const {
  const std::size_t width = input_ + hidden_;
  if (type_ == CellType::kGru) {
    params.add(name(".Wz"), hidden_, width);
    params.add(name(".bz"), hidden_, 1);
    params.add(name(".Wr"), hidden_, width);
    params.add(name(".br"), hidden_, 1);
  }
  params.add(name(".Wh"), hidden_, width);
  params.add(name(".bh"), hidden_, 1);
}

Vector RecurrentCell::forward(const Parameters& params,
                              std::span<const double> x,
                              std::span<const double> h, Cache* cache) const {
  if (x.size() != input_ || h.size() != hidden_) {
    throw ShapeError("recurrent step: input/state size mismatch");
  }
  Vector xh = concat(x, h);
  if (type_ == CellType::kElman) {
    Vector out = tanh(affine(xh, params.at(name(".Wh")), params.at(name(".bh"))));
    if (cache) {
      cache->x.assign(x.begin(), x.end());
      cache->h.assign(h.begin(), h.end());
      cache->candidate = out;
      cache->xh = std::move(xh);
    }
    return out;
  }
  Vector z = sigmoid(affine(xh, params.at(name(".Wz")), params.at(name(".bz"))));
  Vector r = sigmoid(affine(xh, params.at(name(".Wr")), params.at(name(".br"))));
  Vector rh(hidden_);
  for (std::size_t i = 0; i < hidden_; ++i) rh[i] = r[i] * h[i];
  Vector xrh = concat(x, rh);
  Vector cand =
      tanh(affine(xrh, params.at(name(".Wh")), params.at(name(".bh"))));
  Vector out(hidden_);
  for (std::size_t i = 0; i < hidden_; ++i) {
    out[i] = (1.0 - z[i]) * h[i] + z[i] * cand[i];
  }
  if (cache) {
    cache->x.assign(x.begin(), x.end());
    cache->h.assign(h.begin(), h.end());
    cache->z = std::move(z);
    cache->r = std::move(r);
    cache->candidate = std::move(cand);
    cache->xh = std::move(xh);
    cache->xrh = std::move(xrh);
  }
  return out;
}

void RecurrentCell::backward(const Parameters& params, const Cache& cache,
                             std::span<const double> dh_next, Parameters& grads,
                             Vector& dx, Vector& dh_prev) const {
  if (type_ == CellType::kElman) {
    Vector da(hidden_);
    for (std::size_t i = 0; i < hidden_; ++i) {
      da[i] = dh_next[i] * (1.0 - cache.candidate[i] * cache.candidate[i]);
    }
    accumulate_outer(grads, name(".Wh"), name(".bh"), da, cache.xh);
    Vector dxh = matvec_transposed(params.at(name(".Wh")), da);
    dx.assign(dxh.begin(), dxh.begin() + input_);
    dh_prev.assign(dxh.begin() + input_, dxh.end());
    return;
  }

  const auto& z = cache.z;
  const auto& r = cache.r;
  const auto& h = cache.h;
  const auto& cand = cache.candidate;

  Vector dz(hidden_), da_h(hidden_);
  dh_prev.assign(hidden_, 0.0);
  for (std::size_t i = 0; i < hidden_; ++i) {
    dz[i] = dh_next[i] * (cand[i] - h[i]) * z[i] * (1.0 - z[i]);
    da_h[i] = dh_next[i] * z[i] * (1.0 - cand[i] * cand[i]);
    dh_prev[i] = dh_next[i] * (1.0 - z[i]);
  }
  accumulate_outer(grads, name(".Wh"), name(".bh"), da_h, cache.xrh);
  Vector dxrh = matvec_transposed(params.at(name(".Wh")), da_h);

  Vector da_r(hidden_);
  for (std::size_t i = 0; i < hidden_; ++i) {
    const double drh = dxrh[input_ + i];
    dh_prev[i] += drh * r[i];
    da_r[i] = drh * h[i] * r[i] * (1.0 - r[i]);
  }
  accumulate_outer(grads, name(".Wz"), name(".bz"), dz, cache.xh);
  accumulate_outer(grads, name(".Wr"), name(".br"), da_r, cache.xh);
  Vector dxh_z = matvec_transposed(params.at(name(".Wz")), dz);
  Vector dxh_r = matvec_transposed(params.at(name(".Wr")), da_r);

  dx.assign(input_, 0.0);
  for (std::size_t j = 0; j < input_; ++j) {
    dx[j] = dxrh[j] + dxh_z[j] + dxh_r[j];
  }
  for (std::size_t i = 0; i < hidden_; ++i) {
    dh_prev[i] += dxh_z[input_ + i] + dxh_r[input_ + i];
  }
}

}  // namespace vne
