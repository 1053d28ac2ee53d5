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

// L2 norm of the projection of f onto the far-past-in-one-axis algebra
// joined with the invariant sets of the other axis, for the built-in
// fields where both algebras are known in closed form.

#pragma once

#include "mdclt/fields/spec.hpp"

#include <cstdint>
#include <stdexcept>

namespace mdclt::stats {

class UnsupportedSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// i.i.d. field: the conditioning algebra at lag l >= 1 is independent of
// the origin cell, so the projection is E[f] = 0; at l = 0 it contains f.
// Sign-flip field: the algebra contains every driver at every lag, so the
// projection is f itself, of norm 1.
inline double queue_condition_norm(const fields::FieldSpec& spec, std::uint64_t lag) {
  if (spec.as<fields::IidField>()) return lag == 0 ? 1.0 : 0.0;
  if (spec.as<fields::SignFlip>()) return 1.0;
  throw UnsupportedSpec("queue_condition_norm: no closed form for field kind '" + spec.tag() + "'");
}

}  // namespace mdclt::stats
