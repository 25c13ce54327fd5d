#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pauliform/matkit.hpp"

namespace pauliform::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitVerify = 3;

// File or parse problem; run() maps it to kExitInput.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Matrix files hold {"dim": n, "entries": [[[re, im], ...], ...]}.
ComplexMatrix load_matrix(const std::string& path);

// Writes the same layout with every component at 12 significant digits.
void save_matrix(const ComplexMatrix& m, const std::string& path);

// Nearest double with 12 significant decimal digits; reports route every
// float through this so identical inputs serialize byte-identically.
double round_sig12(double x);

// Dispatches analyze / canon / ghz / lhv / selftest. args excludes the
// program name. Reports go to `out` (or the --out file), diagnostics to
// `err`. Returns one of the kExit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pauliform::cli
