#pragma once

#include <string>

#include "protorecon/harness.hpp"

namespace protorecon {

/// Markdown rendering of the bundle: mean E per mask (best per row in bold),
/// coverage effect sizes, family fit ratios, expelled fractions,
/// specialization (mean +/- std), the tau sweep, and the significance
/// matrices. Sections without data are omitted.
std::string render_tables(const OutputBundle& bundle);

}  // namespace protorecon
