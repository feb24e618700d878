#include "betamorph/cli.hpp"

int main(int argc, char** argv) { return betamorph::run_cli(argc, argv); }
