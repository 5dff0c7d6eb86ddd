// SPDX-License-Identifier: Apache-2.0
//
// ddcs - simulator for dynamic double-directional mm-wave channel sounding
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
#include <string>

#include "ddcs/scene.hpp"
#include "ddcs/sounder.hpp"

namespace ddcs {

// Structured-text configuration files, schema = 1. Line-oriented:
//   key = value | key = [a, b, c] | [section]
// '#' starts a comment. Unknown keys and sections are rejected. Units are
// fixed: meters, seconds, degrees, dB, Hz.

struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string &msg, int line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

Scene parse_scene_text(const std::string &text);
Scene load_scene_file(const std::string &path);
std::string scene_to_text(const Scene &scene);

SounderConfig parse_sounder_text(const std::string &text);
SounderConfig load_sounder_file(const std::string &path);
std::string sounder_to_text(const SounderConfig &config);

} // namespace ddcs
