#include "entrev/cli.hpp"

int main(int argc, char** argv) { return entrev::cli::run(argc, argv); }
