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

// Everything in one include.

#pragma once

#include "mdclt/cli/config.hpp"
#include "mdclt/cli/presets.hpp"
#include "mdclt/cli/run.hpp"
#include "mdclt/exact/action.hpp"
#include "mdclt/exact/conditional.hpp"
#include "mdclt/exact/filtration.hpp"
#include "mdclt/exact/finite_space.hpp"
#include "mdclt/exact/fixtures.hpp"
#include "mdclt/exact/partition.hpp"
#include "mdclt/exact/rational.hpp"
#include "mdclt/exact/verify.hpp"
#include "mdclt/fields/generate.hpp"
#include "mdclt/fields/hermite.hpp"
#include "mdclt/fields/philox.hpp"
#include "mdclt/fields/spec.hpp"
#include "mdclt/fields/torus_parity.hpp"
#include "mdclt/fields/window.hpp"
#include "mdclt/limit/bessel.hpp"
#include "mdclt/limit/law.hpp"
#include "mdclt/numeric/gauss_hermite.hpp"
#include "mdclt/stats/convolution.hpp"
#include "mdclt/stats/empirical.hpp"
#include "mdclt/stats/queue.hpp"
#include "mdclt/stats/replicate.hpp"
#include "mdclt/stats/truncation.hpp"
