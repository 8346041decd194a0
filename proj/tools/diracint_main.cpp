#include <diracint/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
    return diracint::cli::main_entry(argc, argv, std::cout, std::cerr);
}
