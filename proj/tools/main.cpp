#include "imputegp/cli.hpp"

int main(int argc, char** argv)
{
    return imputegp::cli::run(argc, argv);
}
