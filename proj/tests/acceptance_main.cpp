// acceptance_main.cpp — runs the acceptance suite and prints one PASS/FAIL line per criterion

#include <iostream>

#include "mqme/acceptance.hpp"

int main() {
    const auto results = mqme::acceptance::run_with_determinism();
    std::cout << mqme::acceptance::report(results);
    return mqme::acceptance::all_pass(results) ? 0 : 1;
}
