// Builds the Catch2 amalgamated sources (with the default main) once.
#include "catch_amalgamated.cpp"
