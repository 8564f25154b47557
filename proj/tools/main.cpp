#include "cli.hpp"

int main(int argc, char** argv)
{
    return accesswalk::cli::run(argc, argv);
}
