#include "playtest/cli.hpp"

int main(int argc, char** argv) { return playtest::run_cli(argc, argv); }
