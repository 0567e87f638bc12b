#include <exception>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"diffsim: serial-crystallography diffraction image simulator "
                 "and texture-feature classification toolkit"};
    app.require_subcommand(1);

    diffsim::cli::setup_generate(app);
    diffsim::cli::setup_features(app);
    diffsim::cli::setup_train(app);
    diffsim::cli::setup_eval(app);
    diffsim::cli::setup_search(app);
    diffsim::cli::setup_preprocess(app);
    diffsim::cli::setup_calibrate(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
