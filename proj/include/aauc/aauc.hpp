// SPDX-License-Identifier: Apache-2.0
//
// aauc: angle-aware user cooperation beamforming for secure massive MIMO
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

#include "aauc/channel.hpp"
#include "aauc/direct.hpp"
#include "aauc/error.hpp"
#include "aauc/evaluate.hpp"
#include "aauc/harness.hpp"
#include "aauc/io.hpp"
#include "aauc/large_scale.hpp"
#include "aauc/numerics.hpp"
#include "aauc/rng.hpp"
#include "aauc/saddle.hpp"
#include "aauc/sco.hpp"
#include "aauc/secrecy.hpp"
#include "aauc/solution.hpp"
#include "aauc/surrogate.hpp"
