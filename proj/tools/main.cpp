#include "camtopo/cli.hpp"

int main(int argc, char** argv) { return camtopo::cli::run_cli(argc, argv); }
