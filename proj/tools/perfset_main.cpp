#include <csignal>

#include "perfset/cli.hpp"

int main(int argc, char** argv) {
    std::signal(SIGPIPE, SIG_IGN);
    return perfset::cli::run(argc, argv);
}
