// Copyright 2026 The mdclt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Materializing realizations. Generation is row by row (last axis
// fastest), so callers that only need sums never hold the whole box.

#pragma once

#include "mdclt/fields/hermite.hpp"
#include "mdclt/fields/philox.hpp"
#include "mdclt/fields/spec.hpp"
#include "mdclt/fields/window.hpp"
#include "mdclt/numeric/gauss_hermite.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdclt::fields {

struct Provenance {
  std::uint64_t spec_digest = 0;
  std::uint64_t seed = 0;
  std::uint32_t replicate = 0;

  bool operator==(const Provenance&) const = default;
};

struct Realization {
  Window window;
  std::vector<double> values;
  Provenance provenance;
};

// Driver values at zero-based positions 0..length-1 of one stream.
inline std::vector<double> axis_drivers(const CounterRng& rng, Driver driver, std::uint32_t stream,
                                        std::uint32_t replicate, std::uint64_t length) {
  std::vector<double> v(length);
  if (driver == Driver::Gaussian) {
    rng.fill_gaussian(stream, replicate, 0, v);
  } else {
    rng.fill_rademacher(stream, replicate, 0, v);
  }
  return v;
}

// The sign-flip field's global coordinate z.
inline double signflip_z(const CounterRng& rng, std::uint32_t stream_base, std::uint32_t replicate) {
  return rng.rademacher(stream_base + 2, replicate, 0);
}

// Per-axis tables h_a(x_i) for a = 1..max_index(axis), indexed [a - 1][i].
using HermiteTable = std::vector<std::vector<double>>;

inline HermiteTable hermite_table(const std::vector<double>& x, std::size_t max_index) {
  HermiteTable t(max_index, std::vector<double>(x.size()));
  std::vector<double> h;
  for (std::size_t i = 0; i < x.size(); ++i) {
    hermite_orthonormal_all(max_index, x[i], h);
    for (std::size_t a = 1; a <= max_index; ++a) t[a - 1][i] = h[a];
  }
  return t;
}

namespace detail {

class RowSource {
 public:
  virtual ~RowSource() = default;
  virtual void fill_row(std::uint64_t row, std::span<double> out) = 0;
};

inline void split_row(const Window& w, std::uint64_t row, std::uint64_t& i, std::uint64_t& j) {
  // Row index -> coordinates of the leading axes (zero-based).
  if (w.dimension() == 2) {
    i = row;
    j = 0;
  } else {
    i = row / w.length(1);
    j = row % w.length(1);
  }
}

class ProductSource final : public RowSource {
 public:
  ProductSource(const FieldSpec& spec, const Window& w, const CounterRng& rng, std::uint32_t rep)
      : window_(w) {
    for (std::size_t k = 0; k < w.dimension(); ++k) {
      axes_.push_back(axis_drivers(rng, spec.driver(), spec.stream_base() + static_cast<std::uint32_t>(k),
                                   rep, w.length(k)));
    }
  }
  void fill_row(std::uint64_t row, std::span<double> out) override {
    std::uint64_t i = 0, j = 0;
    split_row(window_, row, i, j);
    const double prefix = window_.dimension() == 2 ? axes_[0][i] : axes_[0][i] * axes_[1][j];
    const auto& last = axes_.back();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = prefix * last[k];
  }

 private:
  Window window_;
  std::vector<std::vector<double>> axes_;
};

class ChaosSource final : public RowSource {
 public:
  ChaosSource(const FieldSpec& spec, const CoeffTensor& tensor, const Window& w,
              const CounterRng& rng, std::uint32_t rep)
      : window_(w), tensor_(tensor) {
    for (std::size_t k = 0; k < w.dimension(); ++k) {
      const auto x = axis_drivers(rng, spec.driver(), spec.stream_base() + static_cast<std::uint32_t>(k),
                                  rep, w.length(k));
      tables_.push_back(hermite_table(x, tensor.max_index(k)));
    }
  }
  void fill_row(std::uint64_t row, std::span<double> out) override {
    std::uint64_t i = 0, j = 0;
    split_row(window_, row, i, j);
    const auto last_axis = window_.dimension() - 1;
    for (auto& v : out) v = 0.0;
    for (const auto& t : tensor_.terms()) {
      double prefix = t.lambda * tables_[0][t.index[0] - 1][i];
      if (window_.dimension() == 3) prefix *= tables_[1][t.index[1] - 1][j];
      const auto& last = tables_[last_axis][t.index[last_axis] - 1];
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += prefix * last[k];
    }
  }

 private:
  Window window_;
  CoeffTensor tensor_;
  std::vector<HermiteTable> tables_;
};

class SignFlipSource final : public RowSource {
 public:
  SignFlipSource(const FieldSpec& spec, const Window& w, const CounterRng& rng, std::uint32_t rep)
      : x_(axis_drivers(rng, Driver::Rademacher, spec.stream_base(), rep, w.length(0))),
        y_(axis_drivers(rng, Driver::Rademacher, spec.stream_base() + 1, rep, w.length(1))),
        z_(signflip_z(rng, spec.stream_base(), rep)) {}
  void fill_row(std::uint64_t row, std::span<double> out) override {
    // (-1)^{i+j} with one-based i, j has the parity of the zero-based sum.
    double prefix = x_[row] * z_ * ((row & 1U) ? -1.0 : 1.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = prefix * y_[k];
      prefix = -prefix;
    }
  }

 private:
  std::vector<double> x_, y_;
  double z_;
};

class IidSource final : public RowSource {
 public:
  IidSource(const FieldSpec& spec, const CounterRng& rng, std::uint32_t rep)
      : rng_(rng), driver_(spec.driver()), stream_(spec.stream_base()), rep_(rep) {}
  void fill_row(std::uint64_t row, std::span<double> out) override {
    const std::uint64_t first = row * out.size();
    if (driver_ == Driver::Gaussian) {
      rng_.fill_gaussian(stream_, rep_, first, out);
    } else {
      rng_.fill_rademacher(stream_, rep_, first, out);
    }
  }

 private:
  CounterRng rng_;
  Driver driver_;
  std::uint32_t stream_;
  std::uint32_t rep_;
};

class ZeroSource final : public RowSource {
 public:
  void fill_row(std::uint64_t, std::span<double> out) override {
    for (auto& v : out) v = 0.0;
  }
};

class CompositeSource final : public RowSource {
 public:
  CompositeSource(std::unique_ptr<RowSource> g, std::unique_ptr<RowSource> h)
      : g_(std::move(g)), h_(std::move(h)) {}
  void fill_row(std::uint64_t row, std::span<double> out) override {
    g_->fill_row(row, out);
    buffer_.resize(out.size());
    h_->fill_row(row, buffer_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += buffer_[k];
  }

 private:
  std::unique_ptr<RowSource> g_, h_;
  std::vector<double> buffer_;
};

}  // namespace detail

// Integration rule for one driver coordinate: Gauss-Hermite for Gaussian
// drivers, the two-point law for Rademacher drivers.
inline numeric::GaussHermiteRule driver_rule(Driver driver, std::size_t gauss_nodes) {
  if (driver == Driver::Rademacher) return {{1.0, -1.0}, {0.5, 0.5}};
  return numeric::gauss_hermite(gauss_nodes);
}

// The local function of a truncated spec: with g = f 1{|f| <= C} and
// f(u, v, w) = u v w (w = +-1 carries the sign-flip coordinate),
//   f_C = g - E_u[g] - E_v[g] + E_uv[g],
// where E_u integrates the first-axis origin coordinate.
class TruncatedKernel {
 public:
  TruncatedKernel(const Truncated& t)
      : C_(t.C), rule_(driver_rule(t.base->driver(), t.nodes)) {
    for (int s = 0; s < 2; ++s) {
      const double w = s == 0 ? 1.0 : -1.0;
      both_[s] = rule_.expect([&](double u) { return rule_.expect([&](double v) { return g(u, v, w); }); });
    }
  }

  double C() const { return C_; }
  const numeric::GaussHermiteRule& rule() const { return rule_; }

  double g(double u, double v, double w) const {
    const double f = u * v * w;
    return std::abs(f) <= C_ ? f : 0.0;
  }
  // E over the first coordinate at fixed (v, w), and symmetrically.
  double mean_first(double v, double w) const {
    return rule_.expect([&](double u) { return g(u, v, w); });
  }
  double mean_second(double u, double w) const {
    return rule_.expect([&](double v) { return g(u, v, w); });
  }
  double mean_both(double w) const { return both_[w > 0 ? 0 : 1]; }

  double operator()(double u, double v, double w) const {
    return g(u, v, w) - mean_first(v, w) - mean_second(u, w) + mean_both(w);
  }

 private:
  double C_;
  numeric::GaussHermiteRule rule_;
  double both_[2] = {0.0, 0.0};
};

namespace detail {

class TruncatedSource final : public RowSource {
 public:
  TruncatedSource(const Truncated& t, const Window& w, const CounterRng& rng, std::uint32_t rep)
      : kernel_(t) {
    const auto& base = *t.base;
    u_ = axis_drivers(rng, base.driver(), base.stream_base(), rep, w.length(0));
    v_ = axis_drivers(rng, base.driver(), base.stream_base() + 1, rep, w.length(1));
    signflip_ = base.as<SignFlip>() != nullptr;
    z_ = signflip_ ? signflip_z(rng, base.stream_base(), rep) : 1.0;
    for (int s = 0; s < 2; ++s) {
      const double w = s == 0 ? 1.0 : -1.0;
      first_[s].resize(v_.size());
      for (std::size_t j = 0; j < v_.size(); ++j) first_[s][j] = kernel_.mean_first(v_[j], w);
    }
  }
  void fill_row(std::uint64_t row, std::span<double> out) override {
    const double u = u_[row];
    double w = signflip_ && (row & 1U) ? -z_ : z_;
    const double second[2] = {kernel_.mean_second(u, 1.0), kernel_.mean_second(u, -1.0)};
    for (std::size_t k = 0; k < out.size(); ++k) {
      const int s = w > 0 ? 0 : 1;
      out[k] = kernel_.g(u, v_[k], w) - first_[s][k] - second[s] + kernel_.mean_both(w);
      if (signflip_) w = -w;
    }
  }

 private:
  TruncatedKernel kernel_;
  std::vector<double> u_, v_;
  std::vector<double> first_[2];
  bool signflip_ = false;
  double z_ = 1.0;
};

inline std::unique_ptr<RowSource> make_source(const FieldSpec& spec, const Window& w,
                                              const CounterRng& rng, std::uint32_t rep) {
  if (spec.dimension() != w.dimension()) {
    throw std::invalid_argument("field spec of dimension " + std::to_string(spec.dimension()) +
                                " on a window of dimension " + std::to_string(w.dimension()));
  }
  if (spec.as<ProductIid>()) return std::make_unique<ProductSource>(spec, w, rng, rep);
  if (const auto* c = spec.as<ChaosField>()) {
    return std::make_unique<ChaosSource>(spec, c->tensor, w, rng, rep);
  }
  if (spec.as<SignFlip>()) return std::make_unique<SignFlipSource>(spec, w, rng, rep);
  if (spec.as<IidField>()) return std::make_unique<IidSource>(spec, rng, rep);
  if (spec.as<ZeroField>()) return std::make_unique<ZeroSource>();
  if (const auto* c = spec.as<Composite>()) {
    return std::make_unique<CompositeSource>(make_source(*c->g, w, rng, rep),
                                             make_source(*c->h, w, rng, rep));
  }
  if (const auto* t = spec.as<Truncated>()) return std::make_unique<TruncatedSource>(*t, w, rng, rep);
  throw std::logic_error("make_source: unhandled field kind");
}

}  // namespace detail

// Streams the realization one row at a time into `visit(row, span)`.
class RowGenerator {
 public:
  RowGenerator(const FieldSpec& spec, const Window& window, std::uint64_t seed,
               std::uint32_t replicate)
      : window_(window), source_(detail::make_source(spec, window, CounterRng(seed), replicate)),
        row_(window.row_length()) {}

  const Window& window() const { return window_; }

  // Fills and returns row `r` (valid until the next call).
  std::span<const double> row(std::uint64_t r) {
    source_->fill_row(r, row_);
    return row_;
  }

 private:
  Window window_;
  std::unique_ptr<detail::RowSource> source_;
  std::vector<double> row_;
};

inline Realization realize(const FieldSpec& spec, const Window& window, std::uint64_t seed,
                           std::uint32_t replicate = 0) {
  Realization r{window, {}, {digest(spec), seed, replicate}};
  r.values.resize(window.cell_count());
  auto source = detail::make_source(spec, window, CounterRng(seed), replicate);
  const auto len = window.row_length();
  for (std::uint64_t row = 0; row < window.row_count(); ++row) {
    source->fill_row(row, std::span<double>(r.values.data() + row * len, len));
  }
  return r;
}

inline Realization sample_product_iid(const Window& window, std::uint64_t seed,
                                      std::uint32_t replicate = 0,
                                      Driver driver = Driver::Gaussian) {
  return realize(FieldSpec::product_iid(window.dimension(), driver), window, seed, replicate);
}

inline Realization sample_chaos_field(const CoeffTensor& tensor, const Window& window,
                                      std::uint64_t seed, std::uint32_t replicate = 0) {
  return realize(FieldSpec::chaos(tensor), window, seed, replicate);
}

inline Realization sample_signflip(const Window& window, std::uint64_t seed,
                                   std::uint32_t replicate = 0) {
  if (window.dimension() != 2) throw std::invalid_argument("sample_signflip: window must be 2-d");
  return realize(FieldSpec::signflip(), window, seed, replicate);
}

inline Realization sample_iid_field(const Window& window, std::uint64_t seed,
                                    std::uint32_t replicate = 0, Driver driver = Driver::Gaussian) {
  return realize(FieldSpec::iid(window.dimension(), driver), window, seed, replicate);
}

// Flat CSV "i,j[,k],value" with one-based indices.
inline void write_csv(std::ostream& os, const Realization& r) {
  const auto d = r.window.dimension();
  os << (d == 2 ? "i,j,value\n" : "i,j,k,value\n");
  char buf[32];
  for (std::uint64_t flat = 0; flat < r.values.size(); ++flat) {
    for (auto c : r.window.coords(flat)) os << (c + 1) << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.values[flat]);
    os << buf << '\n';
  }
}

}  // namespace mdclt::fields
