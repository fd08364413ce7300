// impact_lattice: command-line front end.
//
// Exit codes: 0 success, 2 usage or parameter-domain error, 1 runtime or I/O error.

#include "cli/driver.hpp"
#include "cli/job.hpp"

#include "impact_lattice/output.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using namespace impact_lattice;
    using namespace impact_lattice::cli;

    std::variant<Job, InfoRequest> parsed;
    try {
        parsed = parse_config(std::vector<std::string>(argv, argv + argc));
    } catch (const UsageError& e) {
        std::cerr << "impact_lattice: " << e.what() << "\n";
        return 2;
    }
    if (auto* info = std::get_if<InfoRequest>(&parsed)) {
        std::cout << info->text << "\n";
        return 0;
    }

    try {
        const RunManifest m = execute(std::get<Job>(parsed), Executor::from_env());
        std::cout << "wrote " << m.outputs.size() + 1 << " files to " << std::get<Job>(parsed).out.string() << "\n";
    } catch (const UsageError& e) {
        std::cerr << "impact_lattice: " << e.what() << "\n";
        return 2;
    } catch (const ParameterError& e) {
        std::cerr << "impact_lattice: --" << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "impact_lattice: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
