#include "terralens/cli.hpp"

int main(int argc, char** argv) { return terralens::run_cli(argc, argv); }
