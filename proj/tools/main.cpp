#include "app.hpp"

int main(int argc, char** argv) { return scfw::app::run(argc, argv); }
