#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "tailclass/errors.hpp"
#include "tailclass/report.hpp"
#include "tailclass/version.hpp"

namespace {

constexpr const char* kUsage =
    "tailclass - numerical classification of distribution tails\n"
    "\n"
    "usage: tailclass <command> --model <spec> [options]\n"
    "\n"
    "commands:\n"
    "  classify   class membership verdicts (D, E, L, S, A, DcapA) for one model\n"
    "  indices    Matuszewska indices for tail/density/hazard plus x h(x) limits\n"
    "  convolve   density/tail/hazard/max-sum curve of a two-model convolution\n"
    "  pitman     Pitman integral sweep over the grid\n"
    "  verify     route-agreement checks (1 model) or convolution closure\n"
    "             (2 models)\n"
    "\n"
    "model specs: pareto:a=2  exp:rate=1  weibull:shape=0.5,scale=1\n"
    "             lognormal:mu=0,sigma=1  burr:c=2,k=1  logppareto:a=2,p=0.3\n"
    "\n"
    "options: --model <spec> (repeatable), --x-start, --grid-ratio, --grid-count,\n"
    "         --window, --u-grid a,b,..., --kappa a,b,..., --tol, --abs-tol,\n"
    "         --rel-tol, --max-depth, --edge-split, --out {json,csv,text},\n"
    "         --output-path <file>\n"
    "\n"
    "exit status: 0 ok, 1 internal error, 2 usage error, 3 a requested verdict\n"
    "was Inconclusive\n";

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (const auto& a : args) {
        if (a == "-h" || a == "--help") {
            std::cout << kUsage;
            return 0;
        }
        if (a == "--version") {
            std::cout << "tailclass " << tailclass::kVersion << "\n";
            return 0;
        }
    }
    if (args.empty()) {
        std::cerr << kUsage;
        return 2;
    }
    try {
        const tailclass::RunConfig config = tailclass::parse_config(args);
        const tailclass::Report report = tailclass::run(config, std::cout);
        return tailclass::any_inconclusive(report) ? 3 : 0;
    } catch (const tailclass::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
