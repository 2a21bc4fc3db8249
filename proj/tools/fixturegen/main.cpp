#include <CLI11.hpp>

#include <iostream>

#include "fixtures.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Regenerate the offline pipeline fixtures.", "aaechat-fixturegen"};
  std::string out;
  std::string gold;
  app.add_option("-o,--out", out, "Fixture directory")->required();
  app.add_option("--gold", gold, "Tagging gold set whose sentences are recorded for replay")->required();
  CLI11_PARSE(app, argc, argv);
  try {
    aaechat::fixturegen::write_pipeline_fixtures(out, gold);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
