/*
   Copyright 2026 The qbeat Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <iosfwd>

namespace qbeat::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kNumericalFailure = 1,
    kInvalidArguments = 2,
};

/// Runs the `qbeat` command line. Results go to `out` unless `--out` names
/// a file; diagnostics and help go to `err` and `out` respectively.
int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

} // namespace qbeat::cli
