// Parse the bounded-buffer model, build its LTS and print the verdicts
// together with the Petri net in ANDL form.

#include <fstream>
#include <iostream>
#include <sstream>

#include "imds/imds.hpp"

int main(int argc, char** argv) {
    const std::string path = argc > 1 ? argv[1] : std::string(IMDS_CORPUS_DIR) + "/buffer.imds";
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return 2;
    }
    std::stringstream text;
    text << in.rdbuf();

    const imds::ParseResult parsed = imds::parse(text.str());
    const imds::Lts lts = imds::build_lts(parsed.model);
    const imds::Report report = imds::analyze(lts, parsed.model);
    std::cout << imds::report_text(parsed.model, lts, report) << "\n";
    std::cout << imds::to_andl(imds::to_petri(parsed.model));
    return report.any_deadlock() ? 1 : 0;
}
