/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <string>
#include <vector>

namespace tiersim::cli {

// Exit codes: 0 success, 2 config, 3 I/O, 4 codec, 5 capacity,
// 6 comparison/fingerprint, 1 anything else.
int run_cli(std::vector<std::string> args);

} // namespace tiersim::cli
