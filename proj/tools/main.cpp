#include "ncg_cli.hpp"

int main(int argc, char** argv) {
    return ncg::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
