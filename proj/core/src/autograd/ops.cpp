// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/autograd/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vad/autograd/kernels.hpp"
#include "vad/error.hpp"

namespace vad::ag {
namespace {

void require_matrix(const char* op, const Tensor& t) {
  if (t.rank() != 2) throw ShapeError(std::string(op) + ": expected a 2-D operand, got " + shape_string(t.shape()));
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                     shape_string(b.shape()));
  }
}

void accumulate(Tensor& dst, std::span<const float> src) {
  auto d = dst.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += src[i];
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_matrix("matmul", av);
  require_matrix("matmul", bv);
  const std::size_t m = av.dim(0), k = av.dim(1), n = bv.dim(1);
  if (bv.dim(0) != k) {
    throw ShapeError("matmul: inner dimensions disagree, " + shape_string(av.shape()) + " x " +
                     shape_string(bv.shape()));
  }
  Tensor out({m, n});
  kernels::gemm_nn(av.data(), bv.data(), out.data(), m, k, n, false);
  return a.graph().record("matmul", std::move(out), {a, b},
                          [a, b, m, k, n](const Tensor& g, std::span<Tensor* const> grads) {
                            if (grads[0] != nullptr) {
                              kernels::gemm_nt(g.data(), b.value().data(), grads[0]->data(), m, n, k, true);
                            }
                            if (grads[1] != nullptr) {
                              kernels::gemm_tn(a.value().data(), g.data(), grads[1]->data(), m, k, n, true);
                            }
                          });
}

Var transpose(const Var& a) {
  const Tensor& av = a.value();
  require_matrix("transpose", av);
  const std::size_t r = av.dim(0), c = av.dim(1);
  Tensor out({c, r});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out.at(j, i) = av.at(i, j);
  return a.graph().record("transpose", std::move(out), {a},
                          [r, c](const Tensor& g, std::span<Tensor* const> grads) {
                            Tensor& ga = *grads[0];
                            for (std::size_t i = 0; i < r; ++i)
                              for (std::size_t j = 0; j < c; ++j) ga.at(i, j) += g.at(j, i);
                          });
}

Var add(const Var& a, const Var& b) {
  require_same_shape("add", a.value(), b.value());
  Tensor out = a.value();
  accumulate(out, b.value().data());
  return a.graph().record("add", std::move(out), {a, b}, [](const Tensor& g, std::span<Tensor* const> grads) {
    for (Tensor* gi : grads)
      if (gi != nullptr) accumulate(*gi, g.data());
  });
}

Var sub(const Var& a, const Var& b) {
  require_same_shape("sub", a.value(), b.value());
  Tensor out = a.value();
  auto o = out.data();
  auto bv = b.value().data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bv[i];
  return a.graph().record("sub", std::move(out), {a, b}, [](const Tensor& g, std::span<Tensor* const> grads) {
    if (grads[0] != nullptr) accumulate(*grads[0], g.data());
    if (grads[1] != nullptr) {
      auto d = grads[1]->data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] -= g[i];
    }
  });
}

Var mul(const Var& a, const Var& b) {
  require_same_shape("mul", a.value(), b.value());
  Tensor out = a.value();
  auto o = out.data();
  auto bv = b.value().data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] *= bv[i];
  return a.graph().record("mul", std::move(out), {a, b}, [a, b](const Tensor& g, std::span<Tensor* const> grads) {
    if (grads[0] != nullptr) {
      auto d = grads[0]->data();
      auto bv = b.value().data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += g[i] * bv[i];
    }
    if (grads[1] != nullptr) {
      auto d = grads[1]->data();
      auto av = a.value().data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += g[i] * av[i];
    }
  });
}

Var add_bias(const Var& x, const Var& bias) {
  const Tensor& xv = x.value();
  require_matrix("add_bias", xv);
  const std::size_t m = xv.dim(0), n = xv.dim(1);
  if (bias.value().size() != n) {
    throw ShapeError("add_bias: bias of shape " + shape_string(bias.value().shape()) + " for input " +
                     shape_string(xv.shape()));
  }
  Tensor out = xv;
  auto bv = bias.value().data();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) += bv[j];
  return x.graph().record("add_bias", std::move(out), {x, bias},
                          [m, n](const Tensor& g, std::span<Tensor* const> grads) {
                            if (grads[0] != nullptr) accumulate(*grads[0], g.data());
                            if (grads[1] != nullptr) {
                              std::vector<double> acc(n, 0.0);
                              for (std::size_t i = 0; i < m; ++i)
                                for (std::size_t j = 0; j < n; ++j) acc[j] += g.at(i, j);
                              auto d = grads[1]->data();
                              for (std::size_t j = 0; j < n; ++j) d[j] += static_cast<float>(acc[j]);
                            }
                          });
}

Var scale(const Var& x, float factor) {
  Tensor out = x.value();
  for (float& v : out.data()) v *= factor;
  return x.graph().record("scale", std::move(out), {x}, [factor](const Tensor& g, std::span<Tensor* const> grads) {
    auto d = grads[0]->data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += factor * g[i];
  });
}

Var add_scalar(const Var& x, float offset) {
  Tensor out = x.value();
  for (float& v : out.data()) v += offset;
  return x.graph().record("add_scalar", std::move(out), {x}, [](const Tensor& g, std::span<Tensor* const> grads) {
    accumulate(*grads[0], g.data());
  });
}

Var relu(const Var& x) {
  Tensor out = x.value();
  for (float& v : out.data()) v = v > 0.0f ? v : 0.0f;
  return x.graph().record("relu", std::move(out), {x}, [x](const Tensor& g, std::span<Tensor* const> grads) {
    auto d = grads[0]->data();
    auto xv = x.value().data();
    for (std::size_t i = 0; i < d.size(); ++i)
      if (xv[i] > 0.0f) d[i] += g[i];
  });
}

Var sigmoid(const Var& x) {
  Tensor out = x.value();
  for (float& v : out.data()) v = static_cast<float>(1.0 / (1.0 + std::exp(-static_cast<double>(v))));
  Tensor y = out;
  return x.graph().record("sigmoid", std::move(out), {x},
                          [y = std::move(y)](const Tensor& g, std::span<Tensor* const> grads) {
                            auto d = grads[0]->data();
                            for (std::size_t i = 0; i < d.size(); ++i) d[i] += g[i] * y[i] * (1.0f - y[i]);
                          });
}

Var dropout(const Var& x, float p, Rng& rng) {
  if (!(p >= 0.0f && p < 1.0f)) throw InvalidArgument("dropout: probability must lie in [0, 1)");
  if (!x.graph().training() || p == 0.0f) return x;
  const float keep_scale = 1.0f / (1.0f - p);
  Tensor mask(x.value().shape());
  for (float& m : mask.data()) m = rng.uniform() < p ? 0.0f : keep_scale;
  Tensor out = x.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return x.graph().record("dropout", std::move(out), {x},
                          [mask = std::move(mask)](const Tensor& g, std::span<Tensor* const> grads) {
                            auto d = grads[0]->data();
                            for (std::size_t i = 0; i < d.size(); ++i) d[i] += g[i] * mask[i];
                          });
}

Var sum(const Var& x) {
  double acc = 0.0;
  for (float v : x.value().data()) acc += v;
  return x.graph().record("sum", Tensor::scalar(static_cast<float>(acc)), {x},
                          [](const Tensor& g, std::span<Tensor* const> grads) {
                            for (float& d : grads[0]->data()) d += g[0];
                          });
}

Var mean(const Var& x) {
  const std::size_t n = x.value().size();
  if (n == 0) throw ShapeError("mean of an empty tensor");
  double acc = 0.0;
  for (float v : x.value().data()) acc += v;
  return x.graph().record("mean", Tensor::scalar(static_cast<float>(acc / static_cast<double>(n))), {x},
                          [n](const Tensor& g, std::span<Tensor* const> grads) {
                            const float share = g[0] / static_cast<float>(n);
                            for (float& d : grads[0]->data()) d += share;
                          });
}

Var l2_norm(const Var& x) {
  double acc = 0.0;
  for (float v : x.value().data()) acc += static_cast<double>(v) * v;
  const double norm = std::sqrt(acc);
  return x.graph().record("l2_norm", Tensor::scalar(static_cast<float>(norm)), {x},
                          [x, norm](const Tensor& g, std::span<Tensor* const> grads) {
                            if (norm == 0.0) return;
                            auto d = grads[0]->data();
                            auto xv = x.value().data();
                            const double s = g[0] / norm;
                            for (std::size_t i = 0; i < d.size(); ++i) d[i] += static_cast<float>(s * xv[i]);
                          });
}

Var conv1d_dilated(const Var& x, const Var& w, std::size_t dilation) {
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  require_matrix("conv1d_dilated", xv);
  if (wv.rank() != 3) throw ShapeError("conv1d_dilated: kernel must be [k x c_in x c_out]");
  if (dilation < 1) throw InvalidArgument("conv1d_dilated: dilation must be >= 1");
  const std::size_t taps = wv.dim(0), c_in = wv.dim(1), c_out = wv.dim(2);
  if (taps % 2 == 0) throw InvalidArgument("conv1d_dilated: kernel size must be odd");
  if (xv.dim(1) != c_in) {
    throw ShapeError("conv1d_dilated: input " + shape_string(xv.shape()) + " vs kernel " + shape_string(wv.shape()));
  }
  const std::size_t steps = xv.dim(0);
  const auto pad = static_cast<std::ptrdiff_t>((taps - 1) * dilation / 2);
  const auto source_row = [=](std::size_t t, std::size_t k) -> std::ptrdiff_t {
    return static_cast<std::ptrdiff_t>(t) + static_cast<std::ptrdiff_t>(k * dilation) - pad;
  };

  Tensor out({steps, c_out});
  std::vector<double> acc(c_out);
  for (std::size_t t = 0; t < steps; ++t) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t k = 0; k < taps; ++k) {
      const std::ptrdiff_t s = source_row(t, k);
      if (s < 0 || s >= static_cast<std::ptrdiff_t>(steps)) continue;
      const float* xr = &xv.data()[static_cast<std::size_t>(s) * c_in];
      const float* wk = &wv.data()[k * c_in * c_out];
      for (std::size_t c = 0; c < c_in; ++c) {
        const double xc = xr[c];
        const float* wrow = wk + c * c_out;
        for (std::size_t o = 0; o < c_out; ++o) acc[o] += xc * wrow[o];
      }
    }
    for (std::size_t o = 0; o < c_out; ++o) out.at(t, o) = static_cast<float>(acc[o]);
  }

  return x.graph().record(
      "conv1d_dilated", std::move(out), {x, w},
      [x, w, steps, taps, c_in, c_out, source_row](const Tensor& g, std::span<Tensor* const> grads) {
        const Tensor& xv = x.value();
        const Tensor& wv = w.value();
        if (grads[0] != nullptr) {
          std::vector<double> gx(steps * c_in, 0.0);
          for (std::size_t t = 0; t < steps; ++t) {
            const float* gr = &g.data()[t * c_out];
            for (std::size_t k = 0; k < taps; ++k) {
              const std::ptrdiff_t s = source_row(t, k);
              if (s < 0 || s >= static_cast<std::ptrdiff_t>(steps)) continue;
              const float* wk = &wv.data()[k * c_in * c_out];
              double* gxr = &gx[static_cast<std::size_t>(s) * c_in];
              for (std::size_t c = 0; c < c_in; ++c) {
                const float* wrow = wk + c * c_out;
                double dot = 0.0;
                for (std::size_t o = 0; o < c_out; ++o) dot += static_cast<double>(gr[o]) * wrow[o];
                gxr[c] += dot;
              }
            }
          }
          auto d = grads[0]->data();
          for (std::size_t i = 0; i < d.size(); ++i) d[i] += static_cast<float>(gx[i]);
        }
        if (grads[1] != nullptr) {
          std::vector<double> gw(taps * c_in * c_out, 0.0);
          for (std::size_t t = 0; t < steps; ++t) {
            const float* gr = &g.data()[t * c_out];
            for (std::size_t k = 0; k < taps; ++k) {
              const std::ptrdiff_t s = source_row(t, k);
              if (s < 0 || s >= static_cast<std::ptrdiff_t>(steps)) continue;
              const float* xr = &xv.data()[static_cast<std::size_t>(s) * c_in];
              double* gwk = &gw[k * c_in * c_out];
              for (std::size_t c = 0; c < c_in; ++c) {
                const double xc = xr[c];
                double* gwrow = gwk + c * c_out;
                for (std::size_t o = 0; o < c_out; ++o) gwrow[o] += xc * gr[o];
              }
            }
          }
          auto d = grads[1]->data();
          for (std::size_t i = 0; i < d.size(); ++i) d[i] += static_cast<float>(gw[i]);
        }
      });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw InvalidArgument("concat_cols of zero parts");
  const std::size_t rows = parts[0].value().rows();
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const Var& p : parts) {
    require_matrix("concat_cols", p.value());
    if (p.value().dim(0) != rows) throw ShapeError("concat_cols: row counts disagree");
    widths.push_back(p.value().dim(1));
    total += widths.back();
  }
  Tensor out({rows, total});
  std::size_t offset = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Tensor& v = parts[p].value();
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < widths[p]; ++j) out.at(i, offset + j) = v.at(i, j);
    offset += widths[p];
  }
  return parts[0].graph().record("concat_cols", std::move(out), {parts.begin(), parts.end()},
                                 [rows, widths, total](const Tensor& g, std::span<Tensor* const> grads) {
                                   std::size_t offset = 0;
                                   for (std::size_t p = 0; p < grads.size(); ++p) {
                                     if (grads[p] != nullptr) {
                                       for (std::size_t i = 0; i < rows; ++i)
                                         for (std::size_t j = 0; j < widths[p]; ++j)
                                           grads[p]->at(i, j) += g[i * total + offset + j];
                                     }
                                     offset += widths[p];
                                   }
                                 });
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw InvalidArgument("concat_rows of zero parts");
  const std::size_t cols = parts[0].value().cols();
  std::vector<std::size_t> counts;
  std::size_t total = 0;
  for (const Var& p : parts) {
    if (p.value().cols() != cols) throw ShapeError("concat_rows: column counts disagree");
    counts.push_back(p.value().size());
    total += p.value().rows();
  }
  std::vector<float> data;
  data.reserve(total * cols);
  for (const Var& p : parts) data.insert(data.end(), p.value().data().begin(), p.value().data().end());
  return parts[0].graph().record("concat_rows", Tensor({total, cols}, std::move(data)), {parts.begin(), parts.end()},
                                 [counts](const Tensor& g, std::span<Tensor* const> grads) {
                                   std::size_t offset = 0;
                                   for (std::size_t p = 0; p < grads.size(); ++p) {
                                     if (grads[p] != nullptr) accumulate(*grads[p], g.data().subspan(offset, counts[p]));
                                     offset += counts[p];
                                   }
                                 });
}

Var slice_rows(const Var& x, std::size_t begin, std::size_t count) {
  const Tensor& xv = x.value();
  require_matrix("slice_rows", xv);
  const std::size_t cols = xv.dim(1);
  Tensor out = xv.row_slice(begin, count);
  return x.graph().record("slice_rows", std::move(out), {x},
                          [begin, count, cols](const Tensor& g, std::span<Tensor* const> grads) {
                            auto d = grads[0]->data().subspan(begin * cols, count * cols);
                            for (std::size_t i = 0; i < d.size(); ++i) d[i] += g[i];
                          });
}

Var select_rows(const Var& x, std::span<const std::size_t> indices) {
  const Tensor& xv = x.value();
  require_matrix("select_rows", xv);
  const std::size_t cols = xv.dim(1);
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  Tensor out({idx.size(), cols});
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx[r] >= xv.dim(0)) throw ShapeError("select_rows: index out of range");
    for (std::size_t j = 0; j < cols; ++j) out.at(r, j) = xv.at(idx[r], j);
  }
  return x.graph().record("select_rows", std::move(out), {x},
                          [idx = std::move(idx), cols](const Tensor& g, std::span<Tensor* const> grads) {
                            for (std::size_t r = 0; r < idx.size(); ++r)
                              for (std::size_t j = 0; j < cols; ++j) grads[0]->at(idx[r], j) += g[r * cols + j];
                          });
}

Var mean_rows(const Var& x) {
  const Tensor& xv = x.value();
  require_matrix("mean_rows", xv);
  const std::size_t rows = xv.dim(0), cols = xv.dim(1);
  if (rows == 0) throw ShapeError("mean_rows of an empty matrix");
  std::vector<double> acc(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) acc[j] += xv.at(i, j);
  Tensor out({1, cols});
  for (std::size_t j = 0; j < cols; ++j) out[j] = static_cast<float>(acc[j] / static_cast<double>(rows));
  return x.graph().record("mean_rows", std::move(out), {x},
                          [rows, cols](const Tensor& g, std::span<Tensor* const> grads) {
                            const float inv = 1.0f / static_cast<float>(rows);
                            for (std::size_t i = 0; i < rows; ++i)
                              for (std::size_t j = 0; j < cols; ++j) grads[0]->at(i, j) += g[j] * inv;
                          });
}

Var scale_rows(const Var& x, const Var& w) {
  const Tensor& xv = x.value();
  require_matrix("scale_rows", xv);
  const std::size_t rows = xv.dim(0), cols = xv.dim(1);
  if (w.value().size() != rows) throw ShapeError("scale_rows: weight count does not match row count");
  Tensor out = xv;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out.at(i, j) *= w.value()[i];
  return x.graph().record("scale_rows", std::move(out), {x, w},
                          [x, w, rows, cols](const Tensor& g, std::span<Tensor* const> grads) {
                            if (grads[0] != nullptr) {
                              for (std::size_t i = 0; i < rows; ++i)
                                for (std::size_t j = 0; j < cols; ++j)
                                  grads[0]->at(i, j) += g[i * cols + j] * w.value()[i];
                            }
                            if (grads[1] != nullptr) {
                              const Tensor& xv = x.value();
                              for (std::size_t i = 0; i < rows; ++i) {
                                double dot = 0.0;
                                for (std::size_t j = 0; j < cols; ++j)
                                  dot += static_cast<double>(g[i * cols + j]) * xv.at(i, j);
                                (*grads[1])[i] += static_cast<float>(dot);
                              }
                            }
                          });
}

Var softmax_rows(const Var& x) {
  const Tensor& xv = x.value();
  require_matrix("softmax_rows", xv);
  const std::size_t rows = xv.dim(0), cols = xv.dim(1);
  Tensor out({rows, cols});
  for (std::size_t i = 0; i < rows; ++i) {
    float peak = xv.at(i, 0);
    for (std::size_t j = 1; j < cols; ++j) peak = std::max(peak, xv.at(i, j));
    double total = 0.0;
    for (std::size_t j = 0; j < cols; ++j) total += std::exp(static_cast<double>(xv.at(i, j)) - peak);
    for (std::size_t j = 0; j < cols; ++j)
      out.at(i, j) = static_cast<float>(std::exp(static_cast<double>(xv.at(i, j)) - peak) / total);
  }
  Tensor y = out;
  return x.graph().record("softmax_rows", std::move(out), {x},
                          [y = std::move(y), rows, cols](const Tensor& g, std::span<Tensor* const> grads) {
                            for (std::size_t i = 0; i < rows; ++i) {
                              double dot = 0.0;
                              for (std::size_t j = 0; j < cols; ++j)
                                dot += static_cast<double>(g[i * cols + j]) * y.at(i, j);
                              for (std::size_t j = 0; j < cols; ++j)
                                grads[0]->at(i, j) += static_cast<float>(y.at(i, j) * (g[i * cols + j] - dot));
                            }
                          });
}

Var binary_cross_entropy(const Var& p, std::span<const float> targets, float eps) {
  const Tensor& pv = p.value();
  const std::size_t n = pv.size();
  if (targets.size() != n) throw ShapeError("binary_cross_entropy: target count does not match predictions");
  if (n == 0) throw ShapeError("binary_cross_entropy of an empty tensor");
  std::vector<float> t(targets.begin(), targets.end());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double q = std::clamp(static_cast<double>(pv[i]), static_cast<double>(eps), 1.0 - eps);
    total -= t[i] * std::log(q) + (1.0 - t[i]) * std::log(1.0 - q);
  }
  return p.graph().record("binary_cross_entropy", Tensor::scalar(static_cast<float>(total / static_cast<double>(n))),
                          {p}, [p, t = std::move(t), eps, n](const Tensor& g, std::span<Tensor* const> grads) {
                            const Tensor& pv = p.value();
                            auto d = grads[0]->data();
                            for (std::size_t i = 0; i < n; ++i) {
                              const double q = pv[i];
                              if (q < eps || q > 1.0 - eps) continue;
                              const double dq = -(t[i] / q - (1.0 - t[i]) / (1.0 - q)) / static_cast<double>(n);
                              d[i] += static_cast<float>(g[0] * dq);
                            }
                          });
}

}  // namespace vad::ag
