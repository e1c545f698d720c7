#include "sahr/cli.hpp"

int main(int argc, char** argv) { return sahr::run_command(argc, argv); }
