#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "abcd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  abcd::cli::Env env;
  std::error_code ec;
  env.self_exe = std::filesystem::read_symlink("/proc/self/exe", ec).string();
  if (ec) env.self_exe = argv[0];
  return abcd::cli::run_cli(args, std::cout, std::cerr, env);
}
