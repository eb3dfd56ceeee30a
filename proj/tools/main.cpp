#include "sibm/cli.hpp"

int main(int argc, char** argv) { return sibm::cli::run(argc, argv); }
