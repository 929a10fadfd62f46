#include "garchvb/cli.hpp"

int main(int argc, char** argv) { return garchvb::run_cli(argc, argv); }
