#include "rampart/kernels.hpp"

#include <algorithm>

#include "rampart/error.hpp"

namespace rampart::kern {

Tensor matmul(const Tensor& a, const Tensor& b, bool ta, bool tb) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw ShapeError("matmul: expects rank-2 tensors, got " + shape_str(a.shape()) +
                     " and " + shape_str(b.shape()));
  }
  const int64_t m = ta ? a.dim(1) : a.dim(0);
  const int64_t k = ta ? a.dim(0) : a.dim(1);
  const int64_t kb = tb ? b.dim(1) : b.dim(0);
  const int64_t n = tb ? b.dim(0) : b.dim(1);
  if (k != kb) {
    throw ShapeError("matmul: inner dimensions differ, " + shape_str(a.shape()) +
                     (ta ? "^T" : "") + " x " + shape_str(b.shape()) + (tb ? "^T" : ""));
  }
  Tensor y({m, n});
  const double* pa = a.data();
  const double* pb = b.data();
  double* py = y.data();
  const int64_t a0 = a.dim(0), a1 = a.dim(1), b1 = b.dim(1);
  (void)a0;
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t l = 0; l < k; ++l) {
      const double av = ta ? pa[l * a1 + i] : pa[i * a1 + l];
      if (av == 0.0) continue;
      if (!tb) {
        const double* pr = pb + l * b1;
        double* po = py + i * n;
        for (int64_t j = 0; j < n; ++j) po[j] += av * pr[j];
      } else {
        double* po = py + i * n;
        for (int64_t j = 0; j < n; ++j) po[j] += av * pb[j * b1 + l];
      }
    }
  }
  return y;
}

namespace {

void check_conv_args(const Tensor& x, const Tensor& w) {
  if (x.rank() != 4 || w.rank() != 4) {
    throw ShapeError("conv2d: expects NCHW input and OIHW weights, got " +
                     shape_str(x.shape()) + " and " + shape_str(w.shape()));
  }
  if (x.dim(1) != w.dim(1)) {
    throw ShapeError("conv2d: channel mismatch, input " + shape_str(x.shape()) +
                     " vs weights " + shape_str(w.shape()));
  }
}

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& w, int ph, int pw) {
  check_conv_args(x, w);
  const int64_t N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  const int64_t O = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  const int64_t Ho = H + 2 * ph - kh + 1;
  const int64_t Wo = W + 2 * pw - kw + 1;
  if (Ho < 1 || Wo < 1) {
    throw ShapeError("conv2d: kernel " + shape_str(w.shape()) + " too large for input " +
                     shape_str(x.shape()));
  }
  Tensor y({N, O, Ho, Wo});
  const double* px = x.data();
  const double* pw_ = w.data();
  double* py = y.data();
  for (int64_t n = 0; n < N; ++n) {
    for (int64_t o = 0; o < O; ++o) {
      double* yo = py + ((n * O + o) * Ho) * Wo;
      for (int64_t c = 0; c < C; ++c) {
        const double* xc = px + ((n * C + c) * H) * W;
        const double* wc = pw_ + ((o * C + c) * kh) * kw;
        for (int64_t u = 0; u < kh; ++u) {
          for (int64_t v = 0; v < kw; ++v) {
            const double wv = wc[u * kw + v];
            if (wv == 0.0) continue;
            const int64_t i_lo = std::max<int64_t>(0, ph - u);
            const int64_t i_hi = std::min<int64_t>(Ho, H + ph - u);
            const int64_t j_lo = std::max<int64_t>(0, pw - v);
            const int64_t j_hi = std::min<int64_t>(Wo, W + pw - v);
            for (int64_t i = i_lo; i < i_hi; ++i) {
              const double* xr = xc + (i + u - ph) * W + (j_lo + v - pw);
              double* yr = yo + i * Wo + j_lo;
              for (int64_t j = 0; j < j_hi - j_lo; ++j) yr[j] += wv * xr[j];
            }
          }
        }
      }
    }
  }
  return y;
}

Tensor conv2d_input_grad(const Tensor& g, const Tensor& w, int ph, int pw,
                         int64_t H, int64_t W) {
  if (g.rank() != 4 || w.rank() != 4) {
    throw ShapeError("conv2d_input_grad: expects rank-4 tensors, got " +
                     shape_str(g.shape()) + " and " + shape_str(w.shape()));
  }
  const int64_t N = g.dim(0), O = g.dim(1), Ho = g.dim(2), Wo = g.dim(3);
  if (O != w.dim(0)) {
    throw ShapeError("conv2d_input_grad: output-channel mismatch, " +
                     shape_str(g.shape()) + " vs " + shape_str(w.shape()));
  }
  const int64_t C = w.dim(1), kh = w.dim(2), kw = w.dim(3);
  Tensor gx({N, C, H, W});
  const double* pg = g.data();
  const double* pw_ = w.data();
  double* po = gx.data();
  for (int64_t n = 0; n < N; ++n) {
    for (int64_t o = 0; o < O; ++o) {
      const double* go = pg + ((n * O + o) * Ho) * Wo;
      for (int64_t c = 0; c < C; ++c) {
        double* xc = po + ((n * C + c) * H) * W;
        const double* wc = pw_ + ((o * C + c) * kh) * kw;
        for (int64_t u = 0; u < kh; ++u) {
          for (int64_t v = 0; v < kw; ++v) {
            const double wv = wc[u * kw + v];
            if (wv == 0.0) continue;
            // x[a,b] receives g[a-u+ph, b-v+pw] * w[u,v]
            const int64_t a_lo = std::max<int64_t>(0, u - ph);
            const int64_t a_hi = std::min<int64_t>(H, Ho + u - ph);
            const int64_t b_lo = std::max<int64_t>(0, v - pw);
            const int64_t b_hi = std::min<int64_t>(W, Wo + v - pw);
            for (int64_t a = a_lo; a < a_hi; ++a) {
              const double* gr = go + (a - u + ph) * Wo + (b_lo - v + pw);
              double* xr = xc + a * W + b_lo;
              for (int64_t b = 0; b < b_hi - b_lo; ++b) xr[b] += wv * gr[b];
            }
          }
        }
      }
    }
  }
  return gx;
}

Tensor conv2d_weight_grad(const Tensor& x, const Tensor& g, int ph, int pw,
                          int64_t kh, int64_t kw) {
  if (x.rank() != 4 || g.rank() != 4) {
    throw ShapeError("conv2d_weight_grad: expects rank-4 tensors, got " +
                     shape_str(x.shape()) + " and " + shape_str(g.shape()));
  }
  const int64_t N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  const int64_t O = g.dim(1), Ho = g.dim(2), Wo = g.dim(3);
  if (g.dim(0) != N) {
    throw ShapeError("conv2d_weight_grad: batch mismatch, " + shape_str(x.shape()) +
                     " vs " + shape_str(g.shape()));
  }
  Tensor gw({O, C, kh, kw});
  const double* px = x.data();
  const double* pg = g.data();
  double* po = gw.data();
  for (int64_t n = 0; n < N; ++n) {
    for (int64_t o = 0; o < O; ++o) {
      const double* go = pg + ((n * O + o) * Ho) * Wo;
      for (int64_t c = 0; c < C; ++c) {
        const double* xc = px + ((n * C + c) * H) * W;
        double* wc = po + ((o * C + c) * kh) * kw;
        for (int64_t u = 0; u < kh; ++u) {
          for (int64_t v = 0; v < kw; ++v) {
            const int64_t i_lo = std::max<int64_t>(0, ph - u);
            const int64_t i_hi = std::min<int64_t>(Ho, H + ph - u);
            const int64_t j_lo = std::max<int64_t>(0, pw - v);
            const int64_t j_hi = std::min<int64_t>(Wo, W + pw - v);
            double acc = 0.0;
            for (int64_t i = i_lo; i < i_hi; ++i) {
              const double* xr = xc + (i + u - ph) * W + (j_lo + v - pw);
              const double* gr = go + i * Wo + j_lo;
              for (int64_t j = 0; j < j_hi - j_lo; ++j) acc += xr[j] * gr[j];
            }
            wc[u * kw + v] += acc;
          }
        }
      }
    }
  }
  return gw;
}

}  // namespace rampart::kern
