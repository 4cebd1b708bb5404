#include "cli.hpp"

int main(int argc, char** argv) { return socrhythm::cli::run(argc, argv); }
