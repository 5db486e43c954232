//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RETROCHEM_SRC_UTIL_EMBEDDED_DATA_H_
#define RETROCHEM_SRC_UTIL_EMBEDDED_DATA_H_

#include <string_view>

// Shipped data files, compiled in so the binaries run without a data dir.
namespace retrochem::embedded {

std::string_view valence_table();
std::string_view template_catalog();

}  // namespace retrochem::embedded

#endif  // RETROCHEM_SRC_UTIL_EMBEDDED_DATA_H_
