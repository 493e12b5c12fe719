// SPDX-License-Identifier: Apache-2.0
//
// mmwlink - link-level simulator for wideband mmWave MIMO with two-stage
// fully digital combining
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

#ifndef MMWLINK_CLI_HPP
#define MMWLINK_CLI_HPP

namespace mmwlink
{

// Full command-line tool: subcommands se-vs-time, se-vs-snr, selftest.
// Returns the process exit code.
int run_cli(int argc, const char* const* argv);

} // namespace mmwlink

#endif
