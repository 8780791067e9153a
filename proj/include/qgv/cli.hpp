#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qgv/linalg.hpp"

namespace qgv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

// Named single-qudit gates (I, X, Z, H, S, T; X/Z/H generalise to any d) and
// multi-qubit gates (CZ, CNOT, CCZ, CCX).
Matrix named_gate(const std::string& name, int d);

// Runs body, mapping ValidationError to 2 and NumericFault to 3 (message on err).
int guarded(const std::function<void()>& body, std::ostream& err);

// Runs one subcommand; args excludes the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgv::cli
