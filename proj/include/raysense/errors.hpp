// SPDX-License-Identifier: Apache-2.0
//
// raysense - deterministic radio propagation and multipath sensing simulator
//
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

namespace raysense
{

/// Scenario text is not well-formed (syntax level, position-annotated message).
class ParseError : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// An input violates a documented invariant; the message names the invariant.
class ValidationError : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// The configured wall-clock budget was exceeded before the run finished.
class BudgetError : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

} // namespace raysense
