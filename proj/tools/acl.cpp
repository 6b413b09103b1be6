#include "acl/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return acl::cli::run(argc, argv, std::cout, std::cerr); }
