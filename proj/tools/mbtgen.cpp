#include "mbtgen/cli.hpp"

int main(int argc, char** argv) { return mbtgen::cli::run(argc, argv); }
