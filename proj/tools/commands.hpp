#ifndef KELVINASYM_TOOLS_COMMANDS_HPP
#define KELVINASYM_TOOLS_COMMANDS_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace kelvinasym::cli {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

// Invalid parameters detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Command {
  CLI::App* app = nullptr;
  std::function<int()> run;
};

std::vector<Command> register_commands(CLI::App& app);

}  // namespace kelvinasym::cli

#endif
