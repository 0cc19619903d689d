// Writes the synthetic CSV fixtures into the directory given as argv[1].

#include <filesystem>
#include <iostream>

#include "ontoclust/pipeline.hpp"
#include "support/synthetic.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <fixtures-dir>\n";
        return 1;
    }
    const std::filesystem::path dir = argv[1];
    ontoclust::write_files(dir, {{"tr_synthetic_200.csv", ontoclust::testing::tr_like_csv({200, 4, 0.8, 2024})}});
    return 0;
}
