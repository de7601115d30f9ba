#include <vector>

#include "casdlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return casdlab::cli::dispatch(args);
}
