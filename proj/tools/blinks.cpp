#include <blinks/cli.hpp>

int main(int argc, char** argv) { return blinks::cli::run(argc, argv); }
