// doctest_main.cpp — shared doctest entry point
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
