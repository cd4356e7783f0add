/*
 * Copyright The tiersim authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

namespace tiersim {

inline constexpr const char* kVersion = "1.0.0";

} // namespace tiersim
