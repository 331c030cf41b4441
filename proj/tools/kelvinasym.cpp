#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "kelvinasym/errors.hpp"
#include "kelvinasym/io.hpp"

using kelvinasym::cli::kExitUsage;
using kelvinasym::cli::kExitVerification;

namespace {

std::string config_value(const kelvinasym::Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return kelvinasym::format_double(v.get<double>());
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) out += (out.empty() ? "" : ",") + config_value(e);
    return out;
  }
  return v.dump();
}

// Removes --config PATH and appends every key of the JSON object that the
// command line does not already set.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (path.empty()) return args;
  const kelvinasym::Json config = kelvinasym::read_json_file(path);
  if (!config.is_object()) throw kelvinasym::cli::UsageError("--config must hold a JSON object");
  for (const auto& [key, value] : config.items()) {
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given || value.is_null()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    args.push_back(config_value(value));
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exterior asymptotics of special-Lagrangian-type equations: exact checks and experiments"};
  app.name("kelvinasym");
  app.require_subcommand(1);
  const auto commands = kelvinasym::cli::register_commands(app);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = merge_config(std::move(args));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  for (const auto& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      return cmd.run();
    } catch (const kelvinasym::cli::UsageError& e) {
      std::cerr << "usage error: " << e.what() << "\n\n" << cmd.app->help();
      return kExitUsage;
    } catch (const kelvinasym::ParseError& e) {
      std::cerr << e.what() << "\n";
      return kExitUsage;
    } catch (const kelvinasym::ValueError& e) {
      std::cerr << e.what() << "\n";
      return kExitUsage;
    } catch (const kelvinasym::DimensionError& e) {
      std::cerr << e.what() << "\n";
      return kExitUsage;
    } catch (const kelvinasym::AdmissibilityError& e) {
      std::cerr << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return kExitVerification;
    }
  }
  return kExitUsage;
}
