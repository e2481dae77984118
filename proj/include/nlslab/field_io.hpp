#pragma once

#include <filesystem>
#include <string>

#include "nlslab/field.hpp"

namespace nlslab {

struct StampedField {
  FourierField field;
  double time = 0.0;
};

/// Shortest-roundtrip-safe decimal: 17 significant digits.
std::string format_double(double v);

/// CSV body: header line "mode,re,im" then one row per mode n = -N..N.
std::string field_to_csv(const FourierField& f);
/// Parses field_to_csv output; the mode set must be exactly -N..N.
FourierField field_from_csv(const std::string& text, double period);

/// Writes <stem>.csv and <stem>.json ({"period", "n_modes", "time"}).
void write_field(const std::filesystem::path& stem, const FourierField& f, double time);
StampedField read_field(const std::filesystem::path& stem);

}  // namespace nlslab
