// Line-protocol evaluator for f = (x1, 1 - x1). Test modes make it misbehave.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "clmea/external.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mock objective evaluator"};
    std::size_t dim = 2;
    std::string mode = "ok";
    int sleep_ms = 5000;
    int after = 0;
    app.add_option("--dim", dim, "decision dimension")->required();
    app.add_option("--mode", mode, "ok|wrong-count|malformed|sleep|crash|bad-echo")
        ->check(CLI::IsMember({"ok", "wrong-count", "malformed", "sleep", "crash", "bad-echo"}));
    app.add_option("--sleep-ms", sleep_ms, "delay used by --mode sleep");
    app.add_option("--after", after, "number of well-formed replies before misbehaving");
    CLI11_PARSE(app, argc, argv);

    std::string line;
    int served = 0;
    while (std::getline(std::cin, line)) {
        std::istringstream in(line);
        std::string verb;
        in >> verb;
        if (verb == "HELLO") {
            std::cout << "READY 2 " << dim << std::endl;
        } else if (verb == "BYE") {
            return 0;
        } else if (verb == "EVAL") {
            long long fe = 0;
            in >> fe;
            std::vector<double> x;
            for (double v; in >> v;) {
                x.push_back(v);
            }
            if (x.size() != dim) {
                std::cerr << "expected " << dim << " values\n";
                return 3;
            }
            const bool misbehave = served++ >= after;
            const double f1 = x[0];
            const double f2 = 1.0 - x[0];
            if (misbehave && mode == "wrong-count") {
                std::cout << "OBJ " << fe << ' ' << clmea::format_exact(f1) << std::endl;
            } else if (misbehave && mode == "malformed") {
                std::cout << "OBJ " << fe << " not-a-number " << clmea::format_exact(f2) << std::endl;
            } else if (misbehave && mode == "sleep") {
                std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
                std::cout << "OBJ " << fe << ' ' << clmea::format_exact(f1) << ' ' << clmea::format_exact(f2)
                          << std::endl;
            } else if (misbehave && mode == "crash") {
                return 7;
            } else if (misbehave && mode == "bad-echo") {
                std::cout << "OBJ " << fe + 1 << ' ' << clmea::format_exact(f1) << ' ' << clmea::format_exact(f2)
                          << std::endl;
            } else {
                std::cout << "OBJ " << fe << ' ' << clmea::format_exact(f1) << ' ' << clmea::format_exact(f2)
                          << std::endl;
            }
        } else {
            std::cerr << "unknown request: " << line << '\n';
            return 4;
        }
    }
    return 0;
}
