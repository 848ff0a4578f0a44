#include "wrt/cli.hpp"

int main(int argc, char** argv) { return wrt::cli::main(argc, argv); }
