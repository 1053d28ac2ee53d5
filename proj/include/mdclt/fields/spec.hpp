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

// Field specifications: which stationary martingale-difference field to
// build, with which driver law and which RNG streams.

#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace mdclt::fields {

enum class Driver { Gaussian, Rademacher };

inline const char* to_string(Driver d) {
  return d == Driver::Gaussian ? "gaussian" : "rademacher";
}

inline Driver driver_from_string(const std::string& s) {
  if (s == "gaussian") return Driver::Gaussian;
  if (s == "rademacher") return Driver::Rademacher;
  throw std::invalid_argument("unknown driver '" + s + "'");
}

struct CoeffTerm {
  std::vector<std::size_t> index;  // one positive basis index per axis
  double lambda = 0.0;

  bool operator==(const CoeffTerm&) const = default;
};

// Finitely supported coefficients lambda_{a,b[,c]} of a chaos expansion.
class CoeffTensor {
 public:
  CoeffTensor() = default;

  CoeffTensor(std::size_t d, std::vector<CoeffTerm> terms) : d_(d), terms_(std::move(terms)) {
    if (d_ != 2 && d_ != 3) throw std::invalid_argument("CoeffTensor: d must be 2 or 3");
    if (terms_.empty()) throw std::invalid_argument("CoeffTensor: empty tensor");
    std::set<std::vector<std::size_t>> seen;
    double ss = 0.0;
    for (const auto& t : terms_) {
      if (t.index.size() != d_) {
        throw std::invalid_argument("CoeffTensor: index arity differs from d");
      }
      for (auto a : t.index) {
        if (a == 0) throw std::invalid_argument("CoeffTensor: indices must be positive");
      }
      if (!seen.insert(t.index).second) {
        throw std::invalid_argument("CoeffTensor: repeated index");
      }
      if (!std::isfinite(t.lambda)) throw std::invalid_argument("CoeffTensor: non-finite lambda");
      ss += t.lambda * t.lambda;
    }
    if (!(ss > 0.0) || !std::isfinite(ss)) {
      throw std::invalid_argument("CoeffTensor: sum of squares must be finite and positive");
    }
  }

  std::size_t dimension() const { return d_; }
  const std::vector<CoeffTerm>& terms() const { return terms_; }

  double sum_squares() const {
    double ss = 0.0;
    for (const auto& t : terms_) ss += t.lambda * t.lambda;
    return ss;
  }

  std::size_t max_index(std::size_t axis) const {
    std::size_t m = 0;
    for (const auto& t : terms_) m = std::max(m, t.index.at(axis));
    return m;
  }

  bool operator==(const CoeffTensor&) const = default;

 private:
  std::size_t d_ = 0;
  std::vector<CoeffTerm> terms_;
};

class FieldSpec;

// Cell (i,j[,k]) = U_i V_j [W_k], one driver sequence per axis.
struct ProductIid {
  std::size_t d = 2;
};

// Cell = sum of lambda h_a(xi_i) h_b(zeta_j) [h_c(theta_k)].
struct ChaosField {
  CoeffTensor tensor;
};

// Cell (i,j) = X_i Y_j z (-1)^{i+j}, d = 2.
struct SignFlip {};

// Every cell an independent driver draw.
struct IidField {
  std::size_t d = 2;
};

// Identically zero.
struct ZeroField {
  std::size_t d = 2;
};

// Cell = g + h on the same window.
struct Composite {
  std::shared_ptr<const FieldSpec> g;
  std::shared_ptr<const FieldSpec> h;
};

// f_C = f 1{|f| <= C} minus its one-sided past projections (see stats/truncation.hpp).
struct Truncated {
  std::shared_ptr<const FieldSpec> base;
  double C = 1.0;
  std::size_t nodes = 64;  // Gauss-Hermite nodes for Gaussian drivers
};

using FieldKind =
    std::variant<ProductIid, ChaosField, SignFlip, IidField, ZeroField, Composite, Truncated>;

class FieldSpec {
 public:
  FieldSpec(FieldKind kind, Driver driver = Driver::Gaussian, std::uint32_t stream_base = 0)
      : kind_(std::move(kind)), driver_(driver), stream_base_(stream_base) {
    validate();
  }

  static FieldSpec product_iid(std::size_t d, Driver driver = Driver::Gaussian,
                               std::uint32_t stream = 0) {
    return FieldSpec(ProductIid{d}, driver, stream);
  }
  static FieldSpec chaos(CoeffTensor t, Driver driver = Driver::Gaussian, std::uint32_t stream = 0) {
    return FieldSpec(ChaosField{std::move(t)}, driver, stream);
  }
  static FieldSpec signflip(std::uint32_t stream = 0) {
    return FieldSpec(SignFlip{}, Driver::Rademacher, stream);
  }
  static FieldSpec iid(std::size_t d, Driver driver = Driver::Gaussian, std::uint32_t stream = 0) {
    return FieldSpec(IidField{d}, driver, stream);
  }
  static FieldSpec zero(std::size_t d) { return FieldSpec(ZeroField{d}); }
  static FieldSpec composite(FieldSpec g, FieldSpec h) {
    return FieldSpec(Composite{std::make_shared<const FieldSpec>(std::move(g)),
                               std::make_shared<const FieldSpec>(std::move(h))});
  }

  const FieldKind& kind() const { return kind_; }
  Driver driver() const { return driver_; }
  std::uint32_t stream_base() const { return stream_base_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }

  std::size_t dimension() const {
    return std::visit(
        [](const auto& k) -> std::size_t {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, ChaosField>) return k.tensor.dimension();
          else if constexpr (std::is_same_v<K, SignFlip>) return 2;
          else if constexpr (std::is_same_v<K, Composite>) return k.g->dimension();
          else if constexpr (std::is_same_v<K, Truncated>) return k.base->dimension();
          else return k.d;
        },
        kind_);
  }

  // RNG streams consumed, ascending.
  std::vector<std::uint32_t> streams() const {
    std::vector<std::uint32_t> out;
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, ZeroField>) {
          } else if constexpr (std::is_same_v<K, IidField>) {
            out.push_back(stream_base_);
          } else if constexpr (std::is_same_v<K, SignFlip>) {
            for (std::uint32_t s = 0; s < 3; ++s) out.push_back(stream_base_ + s);
          } else if constexpr (std::is_same_v<K, Composite>) {
            out = k.g->streams();
            auto h = k.h->streams();
            out.insert(out.end(), h.begin(), h.end());
          } else if constexpr (std::is_same_v<K, Truncated>) {
            out = k.base->streams();
          } else {
            for (std::uint32_t s = 0; s < dimension(); ++s) out.push_back(stream_base_ + s);
          }
        },
        kind_);
    std::sort(out.begin(), out.end());
    return out;
  }

  // Factorized O(l+m+n) evaluation of sums is available.
  bool is_product_structured() const {
    if (as<ProductIid>() || as<ChaosField>() || as<SignFlip>() || as<ZeroField>()) return true;
    if (const auto* c = as<Composite>()) {
      return c->g->is_product_structured() && c->h->is_product_structured();
    }
    return false;
  }

  std::string tag() const {
    static const char* names[] = {"product_iid", "chaos", "signflip", "iid",
                                  "zero",        "composite", "truncated"};
    return names[kind_.index()];
  }

 private:
  void validate() const {
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, ProductIid> || std::is_same_v<K, IidField> ||
                        std::is_same_v<K, ZeroField>) {
            if (k.d != 2 && k.d != 3) throw std::invalid_argument("FieldSpec: d must be 2 or 3");
          } else if constexpr (std::is_same_v<K, ChaosField>) {
            if (k.tensor.terms().empty()) throw std::invalid_argument("FieldSpec: empty tensor");
            if (driver_ == Driver::Rademacher) {
              for (const auto& t : k.tensor.terms()) {
                for (auto a : t.index) {
                  if (a != 1) {
                    throw std::invalid_argument(
                        "FieldSpec: a Rademacher driver only supports basis index 1");
                  }
                }
              }
            }
          } else if constexpr (std::is_same_v<K, SignFlip>) {
            if (driver_ != Driver::Rademacher) {
              throw std::invalid_argument("FieldSpec: signflip requires the Rademacher driver");
            }
          } else if constexpr (std::is_same_v<K, Composite>) {
            if (!k.g || !k.h) throw std::invalid_argument("FieldSpec: composite part missing");
            if (k.g->dimension() != k.h->dimension()) {
              throw std::invalid_argument("FieldSpec: composite parts differ in dimension");
            }
            const auto a = k.g->streams();
            const auto b = k.h->streams();
            std::vector<std::uint32_t> shared;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(shared));
            if (!shared.empty()) {
              throw std::invalid_argument("FieldSpec: composite parts share driver stream " +
                                          std::to_string(shared.front()));
            }
          } else if constexpr (std::is_same_v<K, Truncated>) {
            if (!k.base) throw std::invalid_argument("FieldSpec: truncated base missing");
            const bool ok = (k.base->template as<ProductIid>() && k.base->dimension() == 2) ||
                            k.base->template as<SignFlip>();
            if (!ok) {
              throw std::invalid_argument(
                  "FieldSpec: truncation needs a local spec (product_iid d=2 or signflip)");
            }
            if (!(k.C > 0.0) || !std::isfinite(k.C)) {
              throw std::invalid_argument("FieldSpec: truncation level C must be positive");
            }
            if (k.nodes < 2) throw std::invalid_argument("FieldSpec: too few quadrature nodes");
          }
        },
        kind_);
  }

  FieldKind kind_;
  Driver driver_ = Driver::Gaussian;
  std::uint32_t stream_base_ = 0;
};

inline nlohmann::json to_json(const FieldSpec& spec) {
  nlohmann::json j{{"kind", spec.tag()}};
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Composite>) {
          j["g"] = to_json(*k.g);
          j["h"] = to_json(*k.h);
        } else if constexpr (std::is_same_v<K, Truncated>) {
          j["base"] = to_json(*k.base);
          j["C"] = k.C;
          j["nodes"] = k.nodes;
        } else {
          j["driver"] = to_string(spec.driver());
          j["stream"] = spec.stream_base();
          if constexpr (std::is_same_v<K, ChaosField>) {
            j["d"] = k.tensor.dimension();
            auto& terms = j["terms"] = nlohmann::json::array();
            for (const auto& t : k.tensor.terms()) {
              terms.push_back({{"index", t.index}, {"lambda", t.lambda}});
            }
          } else if constexpr (!std::is_same_v<K, SignFlip>) {
            j["d"] = k.d;
          }
        }
      },
      spec.kind());
  return j;
}

inline FieldSpec field_spec_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const auto driver = driver_from_string(j.value("driver", std::string("gaussian")));
  const auto stream = j.value("stream", std::uint32_t{0});
  if (kind == "product_iid") return FieldSpec(ProductIid{j.at("d").get<std::size_t>()}, driver, stream);
  if (kind == "iid") return FieldSpec(IidField{j.at("d").get<std::size_t>()}, driver, stream);
  if (kind == "zero") return FieldSpec(ZeroField{j.at("d").get<std::size_t>()});
  if (kind == "signflip") {
    return FieldSpec(SignFlip{}, driver_from_string(j.value("driver", std::string("rademacher"))),
                     stream);
  }
  if (kind == "chaos") {
    std::vector<CoeffTerm> terms;
    for (const auto& t : j.at("terms")) {
      terms.push_back({t.at("index").get<std::vector<std::size_t>>(), t.at("lambda").get<double>()});
    }
    return FieldSpec(ChaosField{CoeffTensor(j.at("d").get<std::size_t>(), std::move(terms))},
                     driver, stream);
  }
  if (kind == "composite") {
    return FieldSpec::composite(field_spec_from_json(j.at("g")), field_spec_from_json(j.at("h")));
  }
  if (kind == "truncated") {
    return FieldSpec(Truncated{std::make_shared<const FieldSpec>(field_spec_from_json(j.at("base"))),
                               j.at("C").get<double>(), j.value("nodes", std::size_t{64})});
  }
  throw std::invalid_argument("unknown field kind '" + kind + "'");
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Digest of the canonical (key-sorted) JSON form.
inline std::uint64_t digest(const FieldSpec& spec) { return fnv1a(to_json(spec).dump()); }

}  // namespace mdclt::fields
