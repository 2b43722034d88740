#include "cli.hpp"

int main(int argc, char** argv) {
    return advpipe::cli::cli_main(argc, argv);
}
