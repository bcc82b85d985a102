#include "wildseg/cli.hpp"

int main(int argc, char **argv) {
    return wildseg::cli::main(argc, argv);
}
