#include "cli_app.hpp"

int main(int argc, char** argv) { return tsinfo::cli::run_main(argc, argv); }
