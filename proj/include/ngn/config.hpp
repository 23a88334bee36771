// Copyright 2026 The ngnopt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NGN_CONFIG_HPP
#define NGN_CONFIG_HPP

// Sweep configuration files.
//
// The format is flat: `[section]` headers followed by `key = value` lines,
// `#` comments, lists separated by commas. Sections are [problem],
// [optimizer] (repeatable, one per optimizer), [grid], [budget] and
// [output]. Unknown sections and keys are rejected. See configs/README.md
// for the full key reference.

#include <map>
#include <string>
#include <string_view>

#include "ngn/harness.hpp"

namespace ngn {

SweepSpec parse_config(const std::string &path);
SweepSpec parse_config_text(std::string_view text, const std::string &origin = "<config>");

/// Problem descriptor in `key=value` form separated by ';' or whitespace,
/// using the [problem] keys, e.g. "kind=ridge; dim=100; r=0.1; seed=3".
ProblemSpec parse_problem_descriptor(std::string_view text);

/// Applies one [problem] key to spec. Throws InvalidArgument for unknown
/// keys or malformed values.
void apply_problem_key(ProblemSpec &spec, const std::string &key, const std::string &value);

}  // namespace ngn

#endif  // NGN_CONFIG_HPP
