#include <iostream>

#include "ttk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args;
  std::string format = "json";
  for (int i = 1; i < argc; ++i) {
    args.emplace_back(argv[i]);
    if (args.back() == "--format" && i + 1 < argc) format = argv[i + 1];
  }
  // CLI11 parses back-to-front.
  std::reverse(args.begin(), args.end());
  ttk::Report report;
  std::string err;
  int code = ttk::run_command(args, report, err);
  if (!err.empty()) std::cerr << err << "\n";
  std::cout << ttk::emit_report(report, format);
  return code;
}
