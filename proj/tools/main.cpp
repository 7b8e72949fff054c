#include "rotsym/cli.hpp"

int main(int argc, char** argv) { return rotsym::cli::run(argc, argv); }
