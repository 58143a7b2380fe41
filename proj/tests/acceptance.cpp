// Runs the validate command twice in-process and prints one line per criterion.
#include "weyldyn/cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    json report;
    std::string console;
};

Run validate(const fs::path& out, const std::string& threads)
{
    std::ostringstream sink;
    auto* old = std::cout.rdbuf(sink.rdbuf());
    Run run;
    run.code = weyldyn::run_cli({"weyldyn", "validate", "--out", out.string(), "--threads", threads});
    std::cout.rdbuf(old);
    run.console = sink.str();
    std::ifstream in(out / "report.json");
    if (in)
        run.report = json::parse(in, nullptr, false);
    return run;
}

} // namespace

int main()
{
    const fs::path root = fs::temp_directory_path() / ("weyldyn_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);

    const Run first = validate(root / "first", "1");
    const Run second = validate(root / "second", "4");
    fs::remove_all(root);

    if (!first.report.is_object() || !first.report.contains("criteria")) {
        std::cout << "FAIL acceptance: validate produced no report (exit " << first.code << ")\n"
                  << first.console;
        return 1;
    }

    bool all = true;
    for (const json& c : first.report["criteria"]) {
        const int id = c["id"];
        bool passed = c["passed"];
        std::string note = c["detail"];
        if (id == 14) {
            json a = first.report;
            json b = second.report;
            a.erase("timestamp");
            b.erase("timestamp");
            const bool same = a.dump() == b.dump();
            if (!same)
                note += (note.empty() ? "" : "; ") + std::string("reports differ between runs (1 vs 4 threads)");
            passed = passed && same;
        }
        all = all && passed;
        std::cout << (passed ? "PASS" : "FAIL") << " criterion " << id << ": " << c["name"].get<std::string>();
        if (!note.empty())
            std::cout << " (" << note << ")";
        std::cout << "\n";
    }
    if (first.report["criteria"].size() != 14) {
        std::cout << "FAIL acceptance: expected 14 criteria, got " << first.report["criteria"].size() << "\n";
        all = false;
    }
    if ((first.code == 0) != all) {
        std::cout << "FAIL acceptance: validate exit code " << first.code << " disagrees with the criteria\n";
        all = false;
    }
    return all ? 0 : 1;
}
