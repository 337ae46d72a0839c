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

#include <stdexcept>
#include <string>

namespace aauc {

// Raised when a computation cannot produce a finite, well-defined result
// (non-finite oracle values, singular matrices, empty null spaces).
// The CLI maps it to exit code 2.
class NumericalError : public std::runtime_error
{
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Raised for malformed inputs: bad dimensions, out-of-range parameters,
// unparsable documents. The CLI maps it to exit code 1.
class InputError : public std::invalid_argument
{
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace aauc
