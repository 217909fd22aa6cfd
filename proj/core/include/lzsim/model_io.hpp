// model_io.hpp — File input: custom model definitions and sweep configuration,
// both JSON. Schemas are documented in the README.

#pragma once

#include "lzsim/sweep.hpp"

#include <string>

namespace lzsim {

// Loads { "A": {"re": [[..]], "im": [[..]]} | [[..]], "B": [..], "C": [..],
//         "omega": x, "n_fock": n } with C/omega/n_fock optional. A must be
// Hermitian; B and C are diagonals. Validation errors carry the offending key.
CustomModelInput load_custom_model_file(const std::string& path);
CustomModelInput parse_custom_model(const std::string& json_text);

// Loads a sweep configuration; absent keys keep their defaults. Grid values
// accept either an array of numbers or a "lin:lo:hi:n" / "log:lo:hi:n" string.
SweepConfig load_sweep_config(const std::string& path);
SweepConfig parse_sweep_config(const std::string& json_text);

}  // namespace lzsim
