/*
 * Copyright 2026 The altref Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace altref {

/// Malformed system or relation text. `line` is 1-based, 0 when the problem
/// is not tied to a single line (e.g. a state that never got a label).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line)
    {
    }

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// A system that violates its structural invariants was handed to an algorithm.
class InvalidSystem : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The two compared systems do not declare the same observation alphabet, or
/// an index/game was built for a different system than the one supplied.
class Mismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by the iterative engine when a debug invariant check fails.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace altref
