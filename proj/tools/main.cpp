#include "mtssel/cli.hpp"

int main(int argc, char** argv) { return mtssel::cli::run(argc, argv); }
