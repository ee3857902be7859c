/*
 * Copyright 2026 The slicevuln Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end. Exit codes: 0 success, 1 usage or configuration
// error, 2 data error, 3 numeric failure.

#ifndef SLICEVULN_CLI_HPP_
#define SLICEVULN_CLI_HPP_

namespace slicevuln {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

int run_cli(int argc, char** argv);

}  // namespace slicevuln

#endif  // SLICEVULN_CLI_HPP_
