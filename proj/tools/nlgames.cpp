#include "nlgames/cli.hpp"

int main(int argc, char** argv) { return nlg::cli::run_cli(argc, argv); }
