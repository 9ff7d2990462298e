#include <latdyn/cli.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw latdyn::parse_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw latdyn::parse_error("cannot write report file: " + path);
    out << body;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact dynamical degrees and maximal small-degree fixed point "
                 "counts for lattice dynamical systems"};
    app.set_version_flag("--version", "latdyn 0.1.0");
    app.require_subcommand(1);

    std::string config_path;
    std::string json_path;
    unsigned long n_max = 0;
    std::string cap_str;
    std::string modulus_str;
    int precision = 0;

    struct SubSpec {
        const char* name;
        const char* help;
    };
    const SubSpec specs[] = {
        {"degree", "dynamical degree of the configured system"},
        {"sdd", "maximal small-degree subgroup with restricted and quotient data"},
        {"count", "table of maximal small-degree coset counts per iterate"},
        {"enumerate", "list the maximal coset representatives"},
        {"toric", "orbit census and maximality report on a fan"},
        {"verify", "cross-check fixed point counts against brute force"},
    };
    for (const SubSpec& s : specs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", config_path, "path to a system config (JSON)")
            ->required();
        sub->add_option("--json", json_path, "write the machine report to this file");
        sub->add_option("--precision", precision,
                        "decimal digits for approximate output (1..50)");
        if (std::string(s.name) == "count")
            sub->add_option("--n-max", n_max, "largest iterate in the table");
        if (std::string(s.name) == "enumerate")
            sub->add_option("--cap", cap_str, "enumeration budget");
        if (std::string(s.name) == "verify")
            sub->add_option("--modulus", modulus_str, "torsion grid modulus");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e); // prints help or the error message
        return code == 0 ? 0 : 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    return latdyn::run_guarded(
        [&]() -> int {
            auto given = [&](const char* name) {
                const CLI::Option* o = sub->get_option_no_throw(name);
                return o != nullptr && o->count() > 0;
            };
            latdyn::CliOverrides ov;
            if (given("--n-max")) ov.n_max = n_max;
            if (given("--precision")) ov.precision = precision;
            if (!cap_str.empty()) ov.enumeration_cap = latdyn::parse_bigint(cap_str);
            if (!modulus_str.empty()) ov.oracle_modulus = latdyn::parse_bigint(modulus_str);
            latdyn::CommandOutput out =
                latdyn::run_command(sub->get_name(), read_file(config_path), ov);
            std::cout << out.text;
            if (!json_path.empty()) write_file(json_path, out.report.dump(2) + "\n");
            return out.exit_code;
        },
        std::cerr);
}
