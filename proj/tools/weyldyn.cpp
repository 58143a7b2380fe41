#include "weyldyn/cli.hpp"

int main(int argc, char** argv) { return weyldyn::run_cli(argc, argv); }
