//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_UTIL_LOG_H_
#define RETROCHEM_UTIL_LOG_H_

#include <memory>

#include <spdlog/spdlog.h>

namespace retrochem {

// Shared "retrochem" logger writing to stderr.
spdlog::logger &logger();

}  // namespace retrochem

#endif  // RETROCHEM_UTIL_LOG_H_
