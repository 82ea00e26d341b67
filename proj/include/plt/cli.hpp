// Copyright 2026 The PLT Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plt::cli {

/// Entry point of the command-line tool. Returns the process exit code.
int run(int argc, char** argv);

/// Same, with arguments excluding the program name and explicit streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plt::cli
