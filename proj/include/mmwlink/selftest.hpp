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

#ifndef MMWLINK_SELFTEST_HPP
#define MMWLINK_SELFTEST_HPP

#include <ostream>

namespace mmwlink
{

// Fast built-in numerical checks (independent re-derivations, not golden
// values): channel assembly against the steering-matrix product form,
// noiseless estimator exactness, water-filling against bisection, the
// lossless-compression identity, and run-to-run determinism. Prints one line
// per check; returns the number of failed checks.
int run_selftest(std::ostream& out);

} // namespace mmwlink

#endif
