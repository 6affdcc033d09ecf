#include <qpc/cli.hpp>

int main(int argc, char** argv) { return qpc::cli::main_entry(argc, argv); }
