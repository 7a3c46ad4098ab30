// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "reference.hpp"
#include "vad/autograd/ops.hpp"
#include "vad/eval/evaluate.hpp"
#include "vad/eval/metrics.hpp"
#include "vad/eval/timeline.hpp"
#include "vad/features/feature_file.hpp"
#include "vad/features/normalize.hpp"
#include "vad/mil/magnitude.hpp"
#include "vad/mil/separability_probe.hpp"
#include "vad/tools/cli.hpp"
#include "vad/tsa/attention.hpp"
#include "vad/tsa/topk.hpp"

namespace vad::checks {

namespace {

using Clock = std::chrono::steady_clock;
using ref::Arr;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

ag::Tensor random_tensor(Rng& rng, ag::Shape shape, double lo = -1.0, double hi = 1.0) {
  ag::Tensor t(std::move(shape));
  for (float& v : t.storage()) v = static_cast<float>(rng.uniform(lo, hi));
  return t;
}

// Values away from zero so central differences never straddle a kink.
ag::Tensor away_from_zero(Rng& rng, ag::Shape shape) {
  ag::Tensor t(std::move(shape));
  for (float& v : t.storage()) {
    const double mag = rng.uniform(0.1, 1.0);
    v = static_cast<float>(rng.uniform() < 0.5 ? -mag : mag);
  }
  return t;
}

std::size_t dim(Rng& rng, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

// ---------------------------------------------------------------------------
// Op gradients

struct Aux {
  std::size_t k = 0;
  std::size_t begin = 0, count = 0;
  std::vector<std::size_t> rows;
  std::vector<float> targets;
  std::vector<double> mask;
  std::uint64_t seed = 0;
  float factor = 0.0f;
};

struct OpCase {
  std::string name;
  std::function<std::vector<ag::Tensor>(Rng&, Aux&)> inputs;
  std::function<ag::Var(std::vector<ag::Var>&, Aux&)> op;
  std::function<Arr(const std::vector<Arr>&, const Aux&)> reference;
};

Arr elementwise(const Arr& a, const std::function<double(double)>& f) {
  Arr out = a;
  for (double& v : out.v) v = f(v);
  return out;
}

Arr scalar(double v) {
  Arr a({1});
  a.v[0] = v;
  return a;
}

std::vector<OpCase> op_cases() {
  std::vector<OpCase> c;
  c.push_back({"matmul",
               [](Rng& r, Aux&) {
                 const std::size_t m = dim(r, 1, 4), k = dim(r, 1, 4), n = dim(r, 1, 4);
                 return std::vector{random_tensor(r, {m, k}), random_tensor(r, {k, n})};
               },
               [](std::vector<ag::Var>& v, Aux&) { return ag::matmul(v[0], v[1]); },
               [](const std::vector<Arr>& a, const Aux&) { return ref::matmul(a[0], a[1]); }});
  c.push_back({"transpose",
               [](Rng& r, Aux&) { return std::vector{random_tensor(r, {dim(r, 1, 4), dim(r, 1, 4)})}; },
               [](std::vector<ag::Var>& v, Aux&) { return ag::transpose(v[0]); },
               [](const std::vector<Arr>& a, const Aux&) { return ref::transpose(a[0]); }});
  const auto binary = [&](std::string name, std::function<ag::Var(const ag::Var&, const ag::Var&)> op,
                          std::function<double(double, double)> f) {
    c.push_back({name,
                 [](Rng& r, Aux&) {
                   const ag::Shape s{dim(r, 1, 4), dim(r, 1, 4)};
                   return std::vector{random_tensor(r, s), random_tensor(r, s)};
                 },
                 [op](std::vector<ag::Var>& v, Aux&) { return op(v[0], v[1]); },
                 [f](const std::vector<Arr>& a, const Aux&) {
                   Arr out = a[0];
                   for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = f(a[0].v[i], a[1].v[i]);
                   return out;
                 }});
  };
  binary("add", ag::add, [](double x, double y) { return x + y; });
  binary("sub", ag::sub, [](double x, double y) { return x - y; });
  binary("mul", ag::mul, [](double x, double y) { return x * y; });
  c.push_back({"add_bias",
               [](Rng& r, Aux&) {
                 const std::size_t m = dim(r, 1, 4), n = dim(r, 1, 4);
                 return std::vector{random_tensor(r, {m, n}), random_tensor(r, {n})};
               },
               [](std::vector<ag::Var>& v, Aux&) { return ag::add_bias(v[0], v[1]); },
               [](const std::vector<Arr>& a, const Aux&) { return ref::add_bias(a[0], a[1]); }});
  c.push_back({"scale",
               [](Rng& r, Aux& x) {
                 x.factor = static_cast<float>(r.uniform(-2.0, 2.0));
                 return std::vector{random_tensor(r, {dim(r, 1, 4), dim(r, 1, 4)})};
               },
               [](std::vector<ag::Var>& v, Aux& x) { return ag::scale(v[0], x.factor); },
               [](const std::vector<Arr>& a, const Aux& x) {
                 return elementwise(a[0], [f = static_cast<double>(x.factor)](double v) { return f * v; });
               }});
  c.push_back({"add_scalar",
               [](Rng& r, Aux& x) {
                 x.factor = static_cast<float>(r.uniform(-2.0, 2.0));
                 return std::vector{random_tensor(r, {dim(r, 1, 4), dim(r, 1, 4)})};
               },
               [](std::vector<ag::Var>& v, Aux& x) { return ag::add_scalar(v[0], x.factor); },
               [](const std::vector<Arr>& a, const Aux& x) {
                 return elementwise(a[0], [f = static_cast<double>(x.factor)](double v) { return v + f; });
               }});
  c.push_back({"relu", [](Rng& r, Aux&) { return std::vector{away_from_zero(r, {dim(r, 1, 4), dim(r, 1, 4)})}; },
               [](std::vector<ag::Var>& v, Aux&) { return ag::relu(v[0]); },
               [](const std::vector<Arr>& a, const Aux&) { return ref::relu(a[0]); }});
  c.push_back({"sigmoid",
               [](Rng& r, Aux&) { return std::vector{random_tensor(r, {dim(r, 1, 4), dim(r, 1, 4)}, -3.0, 3.0)}; },
               [](std::vector<ag::Var>& v, Aux&) { return ag::sigmoid(v[0]); },
               [](const std::vector<Arr>& a, const Aux&) { return ref::sigmoid(a[0]); }});
  c.push_back({"dropout",
               [](Rng& r, Aux& x) {
                 const ag::Shape s{dim(r, 1, 4), dim(r, 2, 6)};
                 x.seed = static_cast<std::uint64_t>(r.integer(0, 1 << 30));
                 x.factor = 0.5f;
                 // The mask is what dropout does to a tensor of ones with the same stream.
                 ag::Graph g(true);
                 Rng mask_rng(x.seed);
                 const ag::Tensor& m = ag::dropout(g.constant(ag::Tensor(s, 1.0f)), x.factor, mask_rng).value();
                 x.mask.assign(m.data().begin(), m.data().end());
                 return std::vector{random_tensor(r, s)};
               },
               [](std::vector<ag::Var>& v, Aux& x) {
                 Rng rng(x.seed);
                 return ag::dropout(v[0], x.factor, rng);
               },
               [](const std::vector<Arr>& a, const Aux& x) {
                 Arr out = a[0];
                 for (std::size_t i = 0; i < out.size(); ++i) out.v[i] *= x.mask[i];
                 return out;
               }});
  c.push_back({"sum", [](Rng& r, Aux&) { return std::vector{random_tensor(r, {dim(r, 1, 4), dim(r, 1, 4)})}; },
               [](std::vector<ag::Var>& v, Aux&) { return ag::sum(v[0]); },
               [](const std::vector<Arr>& a, const Aux&) {
                 double s = 0.0;
                 for (double e : a[0].v) s += e;
                 return scalar(s);
               }});
  c.push_back({"mean", [](Rng& r, Aux&) { return std::vector{random_tensor(r, {dim(r, 1, 4), dim(r, 1, 4)})}; },
               [](std::vector<ag::Var>& v, Aux&) { return ag::mean(v[0]); },
               [](const std::vector<Arr>& a, const Aux&) {
                 double s = 0.0;
                 for (double e : a[0].v) s += e;
                 return scalar(s / static_cast<double>(a[0].size()));
               }});
  c.push_back({"l2_norm", [](Rng& r, Aux&) { return std::vector{away_from_zero(r, {dim(r, 1, 4), dim(r, 1, 4)})}; },
               [](std::vector<ag::Var>& v, Aux&) { return ag::l2_norm(v[0]); },
               [](const std::vector<Arr>& a, const Aux&) { return scalar(ref::l2(a[0].v)); }});
  c.push_back({"conv1d_dilated",
               [](Rng& r, Aux& x) {
                 const std::size_t t = dim(r, 1, 7), cin = dim(r, 1, 3), cout = dim(r, 1, 3);
                 const std::size_t taps = r.uniform() < 0.5 ? 3 : 5;
                 x.k = dim(r, 1, 4);
                 return std::vector{random_tensor(r, {t, cin}), random_tensor(r, {taps, cin, cout})};
               },
               [](std::vector<ag::Var>& v, Aux& x) { return ag::conv1d_dilated(v[0], v[1], x.k); },
               [](const std::vector<Arr>& a, const Aux& x) { return ref::conv1d(a[0], a[1], x.k); }});
  c.push_back({"concat_cols",
               [](Rng& r, Aux&) {
                 const std::size_t m = dim(r, 1, 4);
                 return std::vector{random_tensor(r, {m, dim(r, 1, 3)}), random_tensor(r, {m, dim(r, 1, 3)}),
                                    random_tensor(r, {m, dim(r, 1, 3)})};
               },
               [](std::vector<ag::Var>& v, Aux&) { return ag::concat_cols(v); },
               [](const std::vector<Arr>& a, const Aux&) { return ref::concat_cols(a); }});
  c.push_back({"concat_rows",
               [](Rng& r, Aux&) {
                 const std::size_t n = dim(r, 1, 4);
                 return std::vector{random_tensor(r, {dim(r, 1, 3), n}), random_tensor(r, {dim(r, 1, 3), n})};
               },
               [](std::vector<ag::Var>& v, Aux&) { return ag::concat_rows(v); },
               [](const std::vector<Arr>& a, const Aux&) {
                 Arr out({a[0].rows() + a[1].rows(), a[0].cols()});
                 std::copy(a[0].v.begin(), a[0].v.end(), out.v.begin());
                 std::copy(a[1].v.begin(), a[1].v.end(), out.v.begin() + static_cast<std::ptrdiff_t>(a[0].size()));
                 return out;
               }});
  c.push_back({"slice_rows",
               [](Rng& r, Aux& x) {
                 const std::size_t m = dim(r, 1, 6);
                 x.begin = dim(r, 0, m - 1);
                 x.count = dim(r, 1, m - x.begin);
                 return std::vector{random_tensor(r, {m, dim(r, 1, 4)})};
               },
               [](std::vector<ag::Var>& v, Aux& x) { return ag::slice_rows(v[0], x.begin, x.count); },
               [](const std::vector<Arr>& a, const Aux& x) {
                 std::vector<std::size_t> rows(x.count);
                 for (std::size_t i = 0; i < x.count; ++i) rows[i] = x.begin + i;
                 return ref::select_rows(a[0], rows);
               }});
  c.push_back({"select_rows",
               [](Rng& r, Aux& x) {
                 const std::size_t m = dim(r, 1, 6);
                 x.rows.resize(dim(r, 1, 6));
                 for (std::size_t& i : x.rows) i = r.index(m);  // repeats exercise accumulation
                 return std::vector{random_tensor(r, {m, dim(r, 1, 4)})};
               },
               [](std::vector<ag::Var>& v, Aux& x) { return ag::select_rows(v[0], x.rows); },
               [](const std::vector<Arr>& a, const Aux& x) { return ref::select_rows(a[0], x.rows); }});
  c.push_back({"mean_rows", [](Rng& r, Aux&) { return std::vector{random_tensor(r, {dim(r, 1, 5), dim(r, 1, 4)})}; },
               [](std::vector<ag::Var>& v, Aux&) { return ag::mean_rows(v[0]); },
               [](const std::vector<Arr>& a, const Aux&) { return ref::mean_rows(a[0]); }});
  c.push_back({"scale_rows",
               [](Rng& r, Aux&) {
                 const std::size_t m = dim(r, 1, 5);
                 return std::vector{random_tensor(r, {m, dim(r, 1, 4)}), random_tensor(r, {m, 1})};
               },
               [](std::vector<ag::Var>& v, Aux&) { return ag::scale_rows(v[0], v[1]); },
               [](const std::vector<Arr>& a, const Aux&) { return ref::scale_rows(a[0], a[1].v); }});
  c.push_back({"softmax_rows",
               [](Rng& r, Aux&) { return std::vector{random_tensor(r, {dim(r, 1, 4), dim(r, 1, 5)}, -2.0, 2.0)}; },
               [](std::vector<ag::Var>& v, Aux&) { return ag::softmax_rows(v[0]); },
               [](const std::vector<Arr>& a, const Aux&) { return ref::softmax_rows(a[0]); }});
  c.push_back({"binary_cross_entropy",
               [](Rng& r, Aux& x) {
                 const std::size_t n = dim(r, 1, 6);
                 x.targets.resize(n);
                 for (float& t : x.targets) t = r.uniform() < 0.5 ? 0.0f : 1.0f;
                 return std::vector{random_tensor(r, {n, 1}, 0.05, 0.95)};
               },
               [](std::vector<ag::Var>& v, Aux& x) { return ag::binary_cross_entropy(v[0], x.targets); },
               [](const std::vector<Arr>& a, const Aux& x) {
                 double s = 0.0;
                 for (std::size_t i = 0; i < a[0].size(); ++i) s += ref::bce(a[0].v[i], x.targets[i]);
                 return scalar(s / static_cast<double>(a[0].size()));
               }});
  c.push_back({"top_alpha_mean",
               [](Rng& r, Aux& x) {
                 const std::size_t m = dim(r, 1, 6);
                 x.k = dim(r, 1, m);
                 return std::vector{random_tensor(r, {m, dim(r, 1, 4)})};
               },
               [](std::vector<ag::Var>& v, Aux& x) { return mil::top_alpha_mean(v[0], x.k); },
               [](const std::vector<Arr>& a, const Aux& x) {
                 std::vector<double> norms(a[0].rows());
                 for (std::size_t i = 0; i < norms.size(); ++i)
                   norms[i] = ref::l2(std::span<const double>(&a[0].v[i * a[0].cols()], a[0].cols()));
                 return ref::mean_rows(ref::select_rows(a[0], ref::sorted_top(norms, x.k)));
               }});
  return c;
}

}  // namespace

Verdict op_gradients(std::uint64_t seed, std::size_t per_op, double tol) {
  const auto start = Clock::now();
  Rng rng(seed);
  std::size_t instances = 0;
  double worst = 0.0;
  std::string worst_op;
  for (const OpCase& c : op_cases()) {
    for (std::size_t n = 0; n < per_op; ++n) {
      Aux aux;
      const std::vector<ag::Tensor> xs = c.inputs(rng, aux);

      ag::Graph g(true);
      std::vector<ag::Var> vars;
      for (const ag::Tensor& x : xs) vars.push_back(g.variable(x));
      const ag::Var out = c.op(vars, aux);
      const ag::Tensor weights = random_tensor(rng, out.value().shape());
      g.backward(ag::sum(ag::mul(out, g.constant(weights))));

      std::vector<Arr> args;
      for (const ag::Tensor& x : xs) args.push_back(Arr::from(x));
      const Arr w = Arr::from(weights);
      const auto f = [&](const std::vector<Arr>& a) {
        const Arr y = c.reference(a, aux);
        if (y.size() != w.size()) throw std::logic_error(c.name + ": reference output size mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += w.v[i] * y.v[i];
        return s;
      };
      const auto numeric = ref::central_difference(f, args, 1e-4);
      std::vector<double> analytic_all, numeric_all;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const ag::Tensor grad = g.grad(vars[i]);
        analytic_all.insert(analytic_all.end(), grad.data().begin(), grad.data().end());
        numeric_all.insert(numeric_all.end(), numeric[i].begin(), numeric[i].end());
      }
      const double err = ref::normwise_error(analytic_all, numeric_all);
      if (err > worst) {
        worst = err;
        worst_op = c.name;
      }
      ++instances;
    }
  }
  Verdict v;
  v.seconds = since(start);
  v.pass = worst < tol && instances >= 100;
  v.detail = std::to_string(instances) + " instances over " + std::to_string(op_cases().size()) +
             " ops, max normwise rel err " + fmt("%.3g", worst) + " (" + worst_op + "), tol " + fmt("%.0e", tol);
  return v;
}

Verdict normalize_oracle(std::uint64_t seed, std::size_t instances, std::size_t target) {
  const auto start = Clock::now();
  Rng rng(seed);
  std::size_t mismatches = 0, identity_failures = 0;
  for (std::size_t n = 0; n < instances; ++n) {
    const ag::Tensor x = random_tensor(rng, {dim(rng, 1, 97), dim(rng, 1, 8)}, -5.0, 5.0);
    if (!(features::temporal_normalize(x, target) == ref::temporal_normalize(x, target))) ++mismatches;
  }
  for (std::size_t d = 1; d <= 8; ++d) {
    const ag::Tensor x = random_tensor(rng, {target, d});
    if (!(features::temporal_normalize(x, target) == x)) ++identity_failures;
  }
  Verdict v;
  v.seconds = since(start);
  v.pass = mismatches == 0 && identity_failures == 0;
  v.detail = std::to_string(instances) + " random instances, " + std::to_string(mismatches) +
             " bit mismatches; identity at T_k == T failed " + std::to_string(identity_failures) + "/8";
  return v;
}

Verdict topk_structure(std::uint64_t seed, std::size_t max_len) {
  const auto start = Clock::now();
  Rng rng(seed);
  std::size_t configs = 0, row_failures = 0, hard_failures = 0, identity_failures = 0, patterns = 0;
  double worst_row = 0.0, worst_identity = 0.0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    // Every score pattern over {0, 1, 2}^len has ties whenever len > 3.
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= 3;
    for (std::size_t kappa = 1; kappa <= len; ++kappa) {
      ++configs;
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<float> scores(len);
        std::vector<double> keys(len);
        for (std::size_t i = 0, c = code; i < len; ++i, c /= 3) keys[i] = scores[i] = static_cast<float>(c % 3);
        const tsa::TopKResult hard = tsa::topk_score(3, kappa, scores, 0.0, rng);
        const std::vector<std::size_t> want = ref::sorted_top(keys, kappa);
        for (std::size_t k = 0; k < kappa; ++k)
          for (std::size_t i = 0; i < len; ++i)
            if (hard.selection.weight(k, i) != (want[k] == i ? 1.0 : 0.0)) {
              ++hard_failures;
              k = kappa;
              break;
            }
        ++patterns;
      }
      for (int rep = 0; rep < 5; ++rep) {
        const ag::Tensor s = random_tensor(rng, {len}, 0.0, 1.0);
        const tsa::TopKResult soft = tsa::topk_score(50, kappa, s.data(), 0.3, rng);
        for (std::size_t k = 0; k < kappa; ++k) {
          double row = 0.0;
          for (std::size_t i = 0; i < len; ++i) row += soft.selection.weight(k, i);
          worst_row = std::max(worst_row, std::fabs(row - 1.0));
          if (std::fabs(row - 1.0) > 1e-6) ++row_failures;
        }
      }
    }
    // kappa = T: the attention output equals its input.
    tsa::ScorerParams scorer = tsa::ScorerParams::init(3, 8, 4, rng);
    const ag::Tensor x = random_tensor(rng, {len, 3});
    ag::Graph g(true);
    tsa::TsaConfig cfg;
    cfg.ratio = 1.0;
    cfg.samples = 20;
    const tsa::TsaOutput out = tsa::tsa_forward(g.constant(x), scorer, cfg, rng);
    for (std::size_t e = 0; e < x.size(); ++e) {
      const double diff = std::fabs(out.attention.value()[e] - x[e]);
      worst_identity = std::max(worst_identity, diff);
      if (diff > 1e-6) ++identity_failures;
    }
  }
  Verdict v;
  v.seconds = since(start);
  v.pass = row_failures == 0 && hard_failures == 0 && identity_failures == 0;
  v.detail = std::to_string(configs) + " (T, kappa) pairs, T <= " + std::to_string(max_len) + ": " +
             std::to_string(patterns) + " tie patterns with " + std::to_string(hard_failures) +
             " hard-selection errors; max |row sum - 1| " + fmt("%.2g", worst_row) + "; max identity deviation " +
             fmt("%.2g", worst_identity);
  return v;
}

Verdict perturbed_jacobian(std::uint64_t seed, std::size_t length, std::size_t kappa, double sigma,
                           std::size_t samples, double h, double z) {
  const auto start = Clock::now();
  Rng rng(seed);
  const ag::Tensor s = random_tensor(rng, {length}, 0.0, 1.0);
  const tsa::TopKResult res = tsa::topk_score(samples, kappa, s.data(), sigma, rng);
  const std::vector<double> jac = tsa::selection_jacobian(res.draws);

  const std::size_t n = length;
  const double m = static_cast<double>(samples);
  std::vector<double> vbar(n, 0.0);
  for (std::size_t k = 0; k < samples; ++k)
    for (std::size_t i = 0; i < n; ++i) vbar[i] += res.draws.included[k * n + i];
  for (double& e : vbar) e /= m;

  // Per-draw terms: a = Monte-Carlo Jacobian contribution, b = central
  // difference of the indicator at the same noise draw.
  std::vector<double> sum_diff(n * n, 0.0), sum_sq(n * n, 0.0), fd(n * n, 0.0);
  std::vector<double> shifted(n);
  const auto included = [&](std::size_t at, std::size_t draw, std::size_t j, double offset) {
    for (std::size_t i = 0; i < n; ++i) shifted[i] = static_cast<double>(s[i]) + sigma * res.draws.noise[draw * n + i];
    shifted[j] += offset;
    const std::vector<std::size_t> top = ref::sorted_top(shifted, kappa);
    return std::find(top.begin(), top.end(), at) != top.end() ? 1.0 : 0.0;
  };
  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> up(n), down(n);
      for (std::size_t i = 0; i < n; ++i) {
        up[i] = included(i, k, j, h);
        down[i] = included(i, k, j, -h);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double a = (res.draws.included[k * n + i] - vbar[i]) * res.draws.noise[k * n + j] / sigma * m / (m - 1.0);
        const double b = (up[i] - down[i]) / (2.0 * h);
        fd[i * n + j] += b / m;
        sum_diff[i * n + j] += a - b;
        sum_sq[i * n + j] += (a - b) * (a - b);
      }
    }
  }
  std::size_t failures = 0;
  double worst_z = 0.0;
  for (std::size_t e = 0; e < n * n; ++e) {
    const double mean = sum_diff[e] / m;
    const double var = (sum_sq[e] - m * mean * mean) / (m - 1.0);
    const double se = std::sqrt(std::max(var, 0.0) / m);
    const double zs = std::fabs(jac[e] - fd[e]) / std::max(se, 1e-300);
    worst_z = std::max(worst_z, zs);
    if (zs > z) ++failures;
  }
  Verdict v;
  v.seconds = since(start);
  v.pass = failures == 0;
  v.detail = "T=" + std::to_string(length) + " kappa=" + std::to_string(kappa) + " sigma=" + fmt("%g", sigma) +
             " M=" + std::to_string(samples) + " h=" + fmt("%g", h) + ": " + std::to_string(failures) + "/" +
             std::to_string(n * n) + " entries beyond " + fmt("%g", z) + " SE, max |z| " + fmt("%.2f", worst_z);
  return v;
}

DmtFixture dmt_fixture() {
  // Normal bag rows have norms 1, 2, 0.707, 0; abnormal 5, 1.414, 0, 2. With
  // alpha = 1 the selected rows are normal row 1 and abnormal row 0, so the
  // hinge is max(0, 4 - 5 + 2) = 1, and the video scores are 0.2 and 0.9:
  // BCE = (-ln 0.8 - ln 0.9) / 2.
  ag::Graph g(true);
  const ag::Var fn = g.constant(ag::Tensor::matrix(4, 2, {1, 0, 0, 2, 0.5f, 0.5f, 0, 0}));
  const ag::Var fa = g.constant(ag::Tensor::matrix(4, 2, {3, 4, 1, 1, 0, 0, 2, 0}));
  const ag::Var un = g.constant(ag::Tensor::column({0.1f, 0.2f, 0.3f, 0.4f}));
  const ag::Var ua = g.constant(ag::Tensor::column({0.9f, 0.5f, 0.6f, 0.7f}));
  const std::vector<ag::Var> feats{fn, fa}, scores{un, ua};
  const std::vector<int> labels{0, 1};
  mil::DmtConfig cfg;
  cfg.alpha = 1;
  cfg.margin = 4.0;
  const mil::DmtLoss loss = mil::dmt_loss(feats, scores, labels, cfg);
  const double expected = 1.0 + (-std::log(0.8) - std::log(0.9)) / 2.0;
  return {loss.total.value().item(), expected};
}

Verdict magnitude_oracle(std::uint64_t seed, std::size_t instances) {
  const auto start = Clock::now();
  Rng rng(seed);
  std::size_t mean_mismatch = 0, sep_mismatch = 0;
  for (std::size_t n = 0; n < instances; ++n) {
    const std::size_t len = dim(rng, 1, 10), d = dim(rng, 1, 4), alpha = dim(rng, 1, len);
    ag::Tensor a = random_tensor(rng, {len, d}, -3.0, 3.0);
    ag::Tensor b = random_tensor(rng, {len, d}, -3.0, 3.0);
    if (len > 1 && rng.uniform() < 0.3) {
      // Duplicate a row so tie-breaking is exercised.
      const std::size_t from = rng.index(len), to = rng.index(len);
      for (std::size_t j = 0; j < d; ++j) a.at(to, j) = a.at(from, j);
    }
    if (mil::top_alpha_mean(a, alpha) != ref::top_alpha_mean(a, alpha)) ++mean_mismatch;
    if (mil::separability(a, b, alpha) != ref::separability(a, b, alpha)) ++sep_mismatch;
  }
  const DmtFixture fx = dmt_fixture();
  const double fixture_err = std::fabs(fx.loss - fx.expected);
  Verdict v;
  v.seconds = since(start);
  v.pass = mean_mismatch == 0 && sep_mismatch == 0 && fixture_err < 1e-6;
  v.detail = std::to_string(instances) + " instances: " + std::to_string(mean_mismatch) + " top-alpha-mean and " +
             std::to_string(sep_mismatch) + " separability mismatches; DMT fixture " + fmt("%.8f", fx.loss) +
             " vs hand " + fmt("%.8f", fx.expected);
  return v;
}

Verdict separability_shape(std::uint64_t seed, std::size_t trials, std::size_t length, std::size_t epsilon, double z) {
  const auto start = Clock::now();
  mil::ProbeConfig cfg;
  cfg.length = length;
  cfg.epsilon = epsilon;
  cfg.generator = features::default_synthetic_config(seed);
  cfg.seed = seed;
  std::vector<std::size_t> alphas;
  for (std::size_t a = 1; a <= epsilon; ++a) alphas.push_back(a);
  alphas.push_back(length);
  const mil::ProbeResult res = mil::probe_separability(cfg, alphas, trials);

  bool pass = true;
  std::ostringstream os;
  os << "E[Y] by alpha:";
  for (const mil::ProbePoint& p : res.points) os << " " << p.alpha << ":" << fmt("%.3f", p.mean);
  double min_step_z = 1e300;
  for (std::size_t k = 0; k + 1 < epsilon; ++k) {
    const mil::ProbePoint diff = res.difference(k, k + 1);
    const double zs = diff.mean / diff.std_error;
    min_step_z = std::min(min_step_z, zs);
    if (zs < -z) pass = false;
  }
  const mil::ProbePoint drop = res.difference(epsilon, epsilon - 1);  // E[Y_eps] - E[Y_T]
  const double drop_z = drop.mean / drop.std_error;
  if (drop_z < z) pass = false;
  os << "; min step z " << fmt("%.1f", min_step_z) << " (need > -" << fmt("%g", z) << "); alpha=" << epsilon
     << " minus alpha=" << length << " z " << fmt("%.1f", drop_z) << " (need > " << fmt("%g", z) << ")";
  Verdict v;
  v.seconds = since(start);
  v.pass = pass;
  v.detail = os.str();
  return v;
}

Verdict metric_oracles(std::uint64_t seed, std::size_t instances, double tol) {
  const auto start = Clock::now();
  Rng rng(seed);
  double worst_roc = 0.0, worst_pr = 0.0;
  for (std::size_t n = 0; n < instances; ++n) {
    const std::size_t size = dim(rng, 2, 200);
    const double levels = std::vector<double>{3.0, 10.0, 1000.0}[rng.index(3)];
    std::vector<float> scores(size);
    std::vector<std::uint8_t> labels(size);
    for (std::size_t i = 0; i < size; ++i) {
      scores[i] = static_cast<float>(std::floor(rng.uniform() * levels) / levels);
      labels[i] = rng.uniform() < 0.4 ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    worst_roc = std::max(worst_roc, std::fabs(eval::auc_roc(scores, labels) - ref::auc_pairwise(scores, labels)));
    worst_pr = std::max(worst_pr,
                        std::fabs(eval::auc_pr(scores, labels) - ref::average_precision_enumerated(scores, labels)));
  }
  Verdict v;
  v.seconds = since(start);
  v.pass = worst_roc <= tol && worst_pr <= tol;
  v.detail = std::to_string(instances) + " tied instances: max |ROC - pairwise| " + fmt("%.2g", worst_roc) +
             ", max |AP - enumeration| " + fmt("%.2g", worst_pr);
  return v;
}

Verdict unfold_oracle(std::uint64_t seed, std::size_t instances) {
  const auto start = Clock::now();
  Rng rng(seed);
  std::size_t mismatches = 0, padded = 0, truncated = 0;
  for (std::size_t n = 0; n < instances; ++n) {
    const std::size_t len = dim(rng, 1, 40), delta = dim(rng, 1, 20);
    const std::size_t lo = delta * (len - 1) + 1, hi = delta * len + 2 * delta;
    const std::size_t frames = dim(rng, lo, hi);
    padded += frames > delta * len;
    truncated += frames < delta * len;
    const ag::Tensor s = random_tensor(rng, {len}, 0.0, 1.0);
    if (eval::unfold_scores(s.data(), delta, frames) != ref::unfold(s.data(), delta, frames)) ++mismatches;
  }
  Verdict v;
  v.seconds = since(start);
  v.pass = mismatches == 0 && padded > 0 && truncated > 0;
  v.detail = std::to_string(instances) + " triples (" + std::to_string(padded) + " padded, " +
             std::to_string(truncated) + " truncated): " + std::to_string(mismatches) + " mismatches";
  return v;
}

mil::TrainConfig synthetic_train_config(std::uint64_t seed) {
  mil::TrainConfig cfg;
  cfg.length = 16;
  cfg.half_batch = 8;
  cfg.epochs = 200;
  // The default margin of 100 is sized for high-dimensional raw embeddings;
  // these 32-d features have norms around 6-10.
  cfg.dmt.margin = 10.0;
  cfg.model.d = 32;
  cfg.seed = seed;
  return cfg;
}

EndToEndRun end_to_end(std::uint64_t seed, const features::SyntheticConfig& data, const mil::TrainConfig& cfg) {
  const auto start = Clock::now();
  features::SyntheticConfig dcfg = data;
  dcfg.seed = seed;
  const features::SyntheticDataset ds = features::generate_synthetic(dcfg);
  const features::Dataset train{ds.train.manifest, ds.train.records};
  const features::Dataset test{ds.test.manifest, ds.test.records};
  mil::TrainConfig c = cfg;
  c.seed = seed;
  c.model.d = dcfg.d;
  mil::TrainResult res = mil::train(train, c);
  const eval::InferConfig inf{c.tsa_enabled, c.tsa, seed};
  const eval::EvalResult ev = eval::evaluate(test, ds.test.truth, res.model, inf);
  EndToEndRun run;
  run.seed = seed;
  run.auc_roc = ev.report.auc_roc;
  run.initial_loss = res.log.front().loss;
  run.final_loss = res.log.back().loss;
  run.seconds = since(start);
  return run;
}

std::vector<double> ablation_deltas(const features::SyntheticConfig& data, const std::vector<std::uint64_t>& seeds,
                                    std::vector<double>* on, std::vector<double>* off) {
  const features::SyntheticDataset ds = features::generate_synthetic(data);
  const features::Dataset train{ds.train.manifest, ds.train.records};
  const features::Dataset test{ds.test.manifest, ds.test.records};
  std::vector<double> deltas;
  for (std::uint64_t seed : seeds) {
    double auc[2];
    for (int tsa_on = 0; tsa_on < 2; ++tsa_on) {
      mil::TrainConfig c = synthetic_train_config(seed);
      c.model.d = data.d;
      c.tsa_enabled = tsa_on == 1;
      mil::TrainResult res = mil::train(train, c);
      const eval::InferConfig inf{c.tsa_enabled, c.tsa, seed};
      auc[tsa_on] = eval::evaluate(test, ds.test.truth, res.model, inf).report.auc_roc;
    }
    if (on != nullptr) on->push_back(auc[1]);
    if (off != nullptr) off->push_back(auc[0]);
    deltas.push_back(auc[1] - auc[0]);
  }
  return deltas;
}

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  std::vector<std::string> full{"vad"};
  full.insert(full.end(), args.begin(), args.end());
  const int code = tools::cli_main(full, out, err);
  if (code != 0) throw std::runtime_error("vad " + args.at(0) + " failed: " + err.str());
  return code;
}

// Relative path -> bytes for every regular file under dir, except timing.
std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().filename() == "timing.json") continue;
    files[std::filesystem::relative(entry.path(), dir).string()] = features::read_file(entry.path());
  }
  return files;
}

}  // namespace

Verdict cli_determinism(const std::filesystem::path& workdir) {
  const auto start = Clock::now();
  namespace fs = std::filesystem;
  fs::remove_all(workdir);
  std::vector<std::string> stages;
  bool pass = true;
  std::size_t files = 0;
  for (const char* run : {"a", "b"}) {
    const fs::path root = workdir / run;
    run_cli({"gen", "--out", (root / "data").string(), "--seed", "7", "--n-normal", "30", "--n-abnormal", "30"});
    run_cli({"train", "--data", (root / "data").string(), "--out", (root / "train").string(), "--seed", "7", "--T",
             "16", "--epochs", "20", "--margin", "10"});
    run_cli({"eval", "--data", (root / "data").string(), "--checkpoint", (root / "train" / "model.vadc").string(),
             "--seed", "7", "--out", (root / "eval").string()});
  }
  for (const char* stage : {"data", "train", "eval"}) {
    const auto a = snapshot(workdir / "a" / stage);
    const auto b = snapshot(workdir / "b" / stage);
    files += a.size();
    const bool same = !a.empty() && a == b;
    pass = pass && same;
    stages.push_back(std::string(stage) + (same ? " identical" : " DIFFER"));
  }
  Verdict v;
  v.seconds = since(start);
  v.pass = pass;
  v.detail = std::to_string(files) + " files compared: " + stages[0] + ", " + stages[1] + ", " + stages[2];
  return v;
}

}  // namespace vad::checks
