#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sahr/cutting.hpp"
#include "sahr/rational.hpp"

namespace sahr {

struct RunConfig {
  std::uint64_t seed = 0;
  Rational epsilon{1, 10};
  Rational alpha{1, 10};
  unsigned c_exp = 2;
  unsigned C_exp = 2;
  std::size_t cap_product = 1'000'000;
  std::uint64_t exact_cap = 10'000'000;
  CuttingMode cutting_mode = CuttingMode::Sampled;
  std::size_t trials = 1;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitContract = 1;
inline constexpr int kExitInput = 2;

/// args excludes the program name. Reports go to --out or `out`; error
/// records go to --out (when given) and to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, char** argv);

}  // namespace sahr
