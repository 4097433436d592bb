#include "pdfuse/cli.h"

int main(int argc, char** argv) { return pdfuse::cli::run(argc, argv); }
