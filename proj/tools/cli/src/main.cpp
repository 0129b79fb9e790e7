#include "textlier/cli/commands.hpp"

int main(int argc, char** argv) { return textlier::cli::run(argc, argv); }
