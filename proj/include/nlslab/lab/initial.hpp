#pragma once

#include <string>

#include "nlslab/field.hpp"

namespace nlslab::lab {

/// Builds a field from a '+'-separated list of terms:
///   const:c          a_0 += c
///   cos:A[:m]        A cos(2 pi m x / period)      (m defaults to 1)
///   sin:A[:m]        A sin(2 pi m x / period)
///   exp:A[:m]        A exp(2 pi i m x / period)
///   mode:n:re[:im]   a_n += re + i im
///   file:stem        coefficients from <stem>.csv/.json, resized to n_modes
/// Example: "cos:30+const:-5.3070235".
FourierField parse_initial(const std::string& spec, int n_modes, double period = 1.0);

}  // namespace nlslab::lab
