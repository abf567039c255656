#include "hecke/cli.hpp"

int main(int argc, char** argv) { return hecke::cli::run(argc, argv); }
