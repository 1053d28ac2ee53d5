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

// Reference limit laws: samplers, densities, distribution functions and
// characteristic functions.

#pragma once

#include "mdclt/fields/philox.hpp"
#include "mdclt/fields/spec.hpp"
#include "mdclt/limit/bessel.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mdclt::limit {

struct NormalLaw {
  double variance = 1.0;
};

// sum of lambda N^{(1)}_a N^{(2)}_b [N^{(3)}_c] over independent standard normals.
struct ChaosProductLaw {
  fields::CoeffTensor tensor;
};

// N_1 ... N_d for d independent standard normals.
struct ProductOfNormalsLaw {
  std::size_t d = 2;
};

// eta N with eta^2 drawn uniformly from the list, N independent.
struct EtaMixtureLaw {
  std::vector<double> eta_sq;
};

using LimitLaw = std::variant<NormalLaw, ChaosProductLaw, ProductOfNormalsLaw, EtaMixtureLaw>;

class UnsupportedLaw : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string law_name(const LimitLaw& law) {
  static const char* names[] = {"normal", "chaos_product", "product_of_normals", "eta_mixture"};
  return names[law.index()];
}

inline void validate(const LimitLaw& law) {
  if (const auto* n = std::get_if<NormalLaw>(&law)) {
    if (!(n->variance > 0.0) || !std::isfinite(n->variance)) {
      throw std::invalid_argument("NormalLaw: variance must be positive");
    }
  } else if (const auto* p = std::get_if<ProductOfNormalsLaw>(&law)) {
    if (p->d != 2 && p->d != 3) throw std::invalid_argument("ProductOfNormalsLaw: d must be 2 or 3");
  } else if (const auto* e = std::get_if<EtaMixtureLaw>(&law)) {
    if (e->eta_sq.empty()) throw std::invalid_argument("EtaMixtureLaw: no eta^2 samples");
    for (double v : e->eta_sq) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("EtaMixtureLaw: eta^2 samples must be finite and >= 0");
      }
    }
  } else if (std::get<ChaosProductLaw>(law).tensor.terms().empty()) {
    throw std::invalid_argument("ChaosProductLaw: empty tensor");
  }
}

// Counter-based draw source for limit-law samplers: the k-th normal of
// draw r is a pure function of (seed, stream, r, k).
class LimitRng {
 public:
  LimitRng(std::uint64_t seed, std::uint32_t stream, std::uint32_t draw)
      : rng_(seed), stream_(stream), draw_(draw) {}

  double gaussian() { return rng_.gaussian(stream_, draw_, next_gaussian_++); }

  // Uniform on [0, 1) from a companion stream.
  double uniform() {
    const auto b = rng_.block(stream_ ^ 0x80000000U, draw_, next_uniform_++);
    return 1.0 - fields::uniform_open_closed(b[0], b[1]);
  }

 private:
  fields::CounterRng rng_;
  std::uint32_t stream_;
  std::uint32_t draw_;
  std::uint64_t next_gaussian_ = 0;
  std::uint64_t next_uniform_ = 0;
};

inline double sample_limit(const LimitLaw& law, LimitRng& rng) {
  if (const auto* n = std::get_if<NormalLaw>(&law)) return std::sqrt(n->variance) * rng.gaussian();
  if (const auto* p = std::get_if<ProductOfNormalsLaw>(&law)) {
    double x = 1.0;
    for (std::size_t k = 0; k < p->d; ++k) x *= rng.gaussian();
    return x;
  }
  if (const auto* e = std::get_if<EtaMixtureLaw>(&law)) {
    const auto n = e->eta_sq.size();
    auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    if (k >= n) k = n - 1;
    return std::sqrt(e->eta_sq[k]) * rng.gaussian();
  }
  const auto& tensor = std::get<ChaosProductLaw>(law).tensor;
  // Normals N^{(axis)}_a for a = 1..max_index(axis), axis by axis.
  std::vector<std::vector<double>> normals(tensor.dimension());
  for (std::size_t axis = 0; axis < normals.size(); ++axis) {
    normals[axis].resize(tensor.max_index(axis));
    for (auto& v : normals[axis]) v = rng.gaussian();
  }
  double x = 0.0;
  for (const auto& t : tensor.terms()) {
    double prod = t.lambda;
    for (std::size_t axis = 0; axis < normals.size(); ++axis) prod *= normals[axis][t.index[axis] - 1];
    x += prod;
  }
  return x;
}

// Draws 0..count-1, draw r using replicate slot r of the stream.
inline std::vector<double> sample_limit_batch(const LimitLaw& law, std::uint64_t seed,
                                              std::uint32_t stream, std::uint32_t count) {
  validate(law);
  std::vector<double> out(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    LimitRng rng(seed, stream, r);
    out[r] = sample_limit(law, rng);
  }
  return out;
}

// Density of N_1 N_2: K0(|x|) / pi.
inline double density_product_two_normals(double x) {
  if (x == 0.0) throw std::domain_error("density_product_two_normals: singular at 0");
  return bessel_k0(std::abs(x)) / std::numbers::pi;
}

// Characteristic function of N_1 ... N_d. For d = 3, integrating out two
// factors leaves E[(1 + t^2 N^2)^{-1/2}], a one-dimensional integral.
inline double cf_product_normals(double t, std::size_t d) {
  if (d == 2) return 1.0 / std::sqrt(1.0 + t * t);
  if (d != 3) throw std::invalid_argument("cf_product_normals: d must be 2 or 3");
  if (t == 0.0) return 1.0;
  const double t2 = t * t;
  auto f = [t2](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(1.0 + t2 * x * x);
  };
  const double half = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-13);
  return 2.0 * half / std::sqrt(2.0 * std::numbers::pi);
}

inline double cf_eta_mixture(const std::vector<double>& eta_sq, double t) {
  if (eta_sq.empty()) throw std::invalid_argument("cf_eta_mixture: no samples");
  double total = 0.0;
  for (double v : eta_sq) {
    if (!(v >= 0.0)) throw std::invalid_argument("cf_eta_mixture: negative eta^2 sample");
    total += std::exp(-0.5 * v * t * t);
  }
  return total / static_cast<double>(eta_sq.size());
}

// Closed-form or quadrature cf where available: every law except chaos
// products with more than one term.
inline double cf_limit(const LimitLaw& law, double t) {
  validate(law);
  if (const auto* n = std::get_if<NormalLaw>(&law)) return std::exp(-0.5 * n->variance * t * t);
  if (const auto* p = std::get_if<ProductOfNormalsLaw>(&law)) return cf_product_normals(t, p->d);
  if (const auto* e = std::get_if<EtaMixtureLaw>(&law)) return cf_eta_mixture(e->eta_sq, t);
  const auto& tensor = std::get<ChaosProductLaw>(law).tensor;
  if (tensor.terms().size() != 1) {
    throw UnsupportedLaw("cf_limit: no reference cf for a chaos product with several terms");
  }
  return cf_product_normals(tensor.terms().front().lambda * t, tensor.dimension());
}

// Distribution function for the laws with a one-sample reference.
inline double cdf_limit(const LimitLaw& law, double x) {
  validate(law);
  if (const auto* n = std::get_if<NormalLaw>(&law)) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0 * n->variance));
  }
  const auto* p = std::get_if<ProductOfNormalsLaw>(&law);
  if (p == nullptr || p->d != 2) {
    throw UnsupportedLaw("cdf_limit: no distribution function for " + law_name(law) +
                         (p ? " with d = 3" : "") + "; use a two-sample comparison");
  }
  if (x == 0.0) return 0.5;
  const double a = std::abs(x);
  double upper_tail = 0.0;  // P(N_1 N_2 > a)
  auto k0 = [](double u) { return bessel_k0(u); };
  if (a <= 2.0) {
    // Log singularity of K0 at 0 sits on an endpoint, where tanh-sinh copes.
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    upper_tail = 0.5 - ts.integrate(k0, 0.0, a, 1e-13) / std::numbers::pi;
  } else {
    thread_local boost::math::quadrature::exp_sinh<double> es;
    upper_tail = es.integrate(k0, a, std::numeric_limits<double>::infinity(), 1e-13) /
                 std::numbers::pi;
  }
  return x > 0 ? 1.0 - upper_tail : upper_tail;
}

struct CFGrid {
  std::vector<double> t;
  std::vector<double> cf;
  std::vector<double> imag;  // monitored imaginary part; empty for exact cfs
};

inline CFGrid cf_grid(const LimitLaw& law, const std::vector<double>& t) {
  CFGrid g{t, {}, {}};
  for (double v : t) g.cf.push_back(cf_limit(law, v));
  return g;
}

inline void write_csv(std::ostream& os, const CFGrid& g) {
  os << (g.imag.empty() ? "t,cf\n" : "t,cf,imag\n");
  char buf[96];
  for (std::size_t k = 0; k < g.t.size(); ++k) {
    if (g.imag.empty()) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.t[k], g.cf[k]);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.t[k], g.cf[k], g.imag[k]);
    }
    os << buf;
  }
}

inline nlohmann::json to_json(const LimitLaw& law) {
  nlohmann::json j{{"law", law_name(law)}};
  if (const auto* n = std::get_if<NormalLaw>(&law)) {
    j["variance"] = n->variance;
  } else if (const auto* p = std::get_if<ProductOfNormalsLaw>(&law)) {
    j["d"] = p->d;
  } else if (const auto* e = std::get_if<EtaMixtureLaw>(&law)) {
    j["eta_sq"] = e->eta_sq;
  } else {
    const auto& tensor = std::get<ChaosProductLaw>(law).tensor;
    j["d"] = tensor.dimension();
    auto& terms = j["terms"] = nlohmann::json::array();
    for (const auto& t : tensor.terms()) terms.push_back({{"index", t.index}, {"lambda", t.lambda}});
  }
  return j;
}

inline LimitLaw law_from_json(const nlohmann::json& j) {
  const auto name = j.at("law").get<std::string>();
  LimitLaw law;
  if (name == "normal") {
    law = NormalLaw{j.value("variance", 1.0)};
  } else if (name == "product_of_normals") {
    law = ProductOfNormalsLaw{j.at("d").get<std::size_t>()};
  } else if (name == "eta_mixture") {
    law = EtaMixtureLaw{j.at("eta_sq").get<std::vector<double>>()};
  } else if (name == "chaos_product") {
    std::vector<fields::CoeffTerm> terms;
    for (const auto& t : j.at("terms")) {
      terms.push_back({t.at("index").get<std::vector<std::size_t>>(), t.at("lambda").get<double>()});
    }
    law = ChaosProductLaw{fields::CoeffTensor(j.at("d").get<std::size_t>(), std::move(terms))};
  } else {
    throw std::invalid_argument("unknown limit law '" + name + "'");
  }
  validate(law);
  return law;
}

}  // namespace mdclt::limit
