#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "baw/errors.hpp"
#include "baw/runner.hpp"
#include "baw/serialize.hpp"

namespace {

// The --budget override lands on the kind's main size knob.
void apply_budget(baw::RunSpec& spec, std::size_t budget) {
    switch (spec.kind) {
    case baw::RunKind::tight_coding:
        spec.tight_coding->budget = budget;
        return;
    case baw::RunKind::cp_plus:
        spec.cp_plus->grid.n_cols = budget;
        return;
    case baw::RunKind::lambda_system:
        spec.lambda_system->overlap = budget;
        return;
    case baw::RunKind::as_construction:
        spec.as_construction->samples = budget;
        return;
    case baw::RunKind::transversal:
        spec.transversal->cases = budget;
        return;
    case baw::RunKind::selftest:
        throw baw::usage_error("the selftest has no budget to override");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite Boolean algebra workbench"};
    std::string spec_path, output, format = "json";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> budget;
    bool selftest = false;
    app.add_option("-s,--spec", spec_path, "run spec, a JSON file");
    app.add_option("-o,--output", output, "report path; default is the spec's, else stdout");
    app.add_option("-f,--format", format, "report format")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_option("--seed", seed, "override the spec's seed");
    app.add_option("--budget", budget, "override the spec's main size knob");
    app.add_flag("--selftest", selftest, "run the built-in battery instead of a spec");
    CLI11_PARSE(app, argc, argv);

    try {
        baw::RunSpec spec;
        if (selftest) {
            if (!spec_path.empty()) {
                std::cerr << "baw: --selftest does not take a spec\n";
                return 2;
            }
            spec.kind = baw::RunKind::selftest;
            spec.selftest = baw::SelftestRun{};
        } else if (!spec_path.empty()) {
            spec = baw::parse_spec_file(spec_path);
        } else {
            std::cerr << "baw: a spec path or --selftest is required\n";
            return 2;
        }
        if (seed) spec.seed = *seed;
        if (budget) {
            apply_budget(spec, *budget);
            // Overrides go through the same gate as parsed documents.
            spec = baw::parse_spec_text(baw::spec_to_json(spec), "<override>");
        }

        auto start = std::chrono::steady_clock::now();
        baw::Report report = baw::run(spec);
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::cerr << "baw: " << baw::run_kind_name(spec.kind) << " finished in " << ms
                  << " ms\n";

        std::string body = format == "json" ? report.json : baw::render_text(report.json);
        std::string dest = !output.empty() ? output : spec.output;
        if (dest.empty()) {
            std::cout << body;
        } else {
            std::ofstream out(dest, std::ios::binary);
            if (!out) {
                std::cerr << "baw: cannot write " << dest << "\n";
                return 2;
            }
            out << body;
        }
        return report.ok ? 0 : 1;
    } catch (const baw::error& e) {
        std::cerr << "baw: " << e.what() << "\n";
        return 2;
    }
}
