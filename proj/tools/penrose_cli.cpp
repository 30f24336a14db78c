#include <iostream>

#include "penrose/cli.hpp"

int main(int argc, char** argv) {
  try {
    return penrose::cli::run(argc, argv, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return penrose::cli::kInternalError;
  }
}
