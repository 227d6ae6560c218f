#include "ccn/cli.hpp"

int main(int argc, char** argv) { return ccn::run_cli(argc, argv); }
