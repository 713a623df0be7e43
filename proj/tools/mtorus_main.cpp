#include "mtorus/cli.hpp"

int main(int argc, char** argv) { return mtorus::cli::run_main(argc, argv); }
