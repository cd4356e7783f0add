/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <vector>

#include "tiersim_cli/commands.hpp"

int main(int argc, char** argv) {
    return tiersim::cli::run_cli({argv + 1, argv + argc});
}
