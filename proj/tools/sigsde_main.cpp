#include <vector>

#include "sigsde/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sigsde::run_cli(args);
}
