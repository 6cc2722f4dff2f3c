#include <iostream>

#include "gentrans/translator.hpp"

int main(int argc, char** argv) {
  using namespace gentrans;
  TranslatorConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const HelpRequested& help) {
    std::cout << help.text;
    return 0;
  } catch (const Error& e) {
    std::cerr << "gentrans: " << e.message() << "\n";
    return exit_code(RunStatus::UserError);
  }

  std::ios::sync_with_stdio(false);
  RunReport report = translate(config, std::cin, std::cout, [](const Diagnostic& d) {
    std::cerr << d.render() << '\n';
  });
  return exit_code(report.status);
}
