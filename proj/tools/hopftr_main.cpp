#include "hopftr/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    bool text_mode = false;
    for (auto& a : args)
        if (a == "--text") text_mode = true;
    hopftr::CommandResult result = hopftr::run(args);
    if (text_mode) {
        std::cout << result.text;
        if (!result.text.empty() && result.text.back() != '\n') std::cout << "\n";
        for (auto& d : result.diagnostics) std::cerr << d << "\n";
    } else {
        std::cout << result.envelope().dump(2) << "\n";
    }
    return result.exit_code();
}
