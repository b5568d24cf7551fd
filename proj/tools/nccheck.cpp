#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "nc/suite.hpp"

namespace {

nc::Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nc::ParseError("cannot open file: " + path);
    nc::Json j;
    in >> j;
    return j;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out, const std::string& format, int jobs) {
    nc::SuiteConfig cfg;
    try {
        cfg = nc::suite_config_from_json(read_json_file(config_path));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (seed) cfg.seed = *seed;
    if (!out.empty()) cfg.output_path = out;
    if (!format.empty()) cfg.output_format = format;
    if (jobs > 0) cfg.jobs = jobs;
    return nc::run_suite(cfg, std::cout).exit_code;
}

int cmd_paper_suite(std::optional<std::uint64_t> seed, const std::string& out,
                    const std::string& format, int jobs) {
    nc::SuiteConfig cfg = nc::builtin_paper_suite();
    if (seed) cfg.seed = *seed;
    if (!out.empty()) cfg.output_path = out;
    if (!format.empty()) cfg.output_format = format;
    if (jobs > 0) cfg.jobs = jobs;
    return nc::run_suite(cfg, std::cout).exit_code;
}

int cmd_membership(const std::string& domain_path, const std::string& point_path) {
    try {
        nc::DomainSpec spec = nc::domain_from_json(read_json_file(domain_path));
        nc::NcPoint x = nc::point_from_json(read_json_file(point_path));
        nc::MembershipVerdict v = nc::membership(spec, x);
        nc::Json out;
        switch (v.member) {
            case nc::Member::Yes: out["member"] = "yes"; break;
            case nc::Member::No: out["member"] = "no"; break;
            case nc::Member::Undetermined: out["member"] = "undetermined"; break;
        }
        if (v.margin) out["margin"] = *v.margin;
        if (v.norm_value) out["norm"] = *v.norm_value;
        if (v.similarity) out["similarity"] = nc::to_json(*v.similarity);
        std::cout << out.dump(2) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_apply(const std::string& map_path, const std::string& point_path) {
    try {
        nc::NcMapExpr expr = nc::map_from_json(read_json_file(map_path));
        nc::NcPoint x = nc::point_from_json(read_json_file(point_path));
        std::cout << nc::to_json(nc::apply(expr, x)).dump(2) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for matrix-tuple domains and their automorphisms"};
    app.require_subcommand(1);

    std::string config_path, out, format, domain_path, point_path, map_path;
    std::optional<std::uint64_t> seed;
    int jobs = 0;

    auto* run = app.add_subcommand("run", "run a check suite from a JSON config");
    run->add_option("--config", config_path, "suite config file")->required();
    run->add_option("--seed", seed, "override the suite seed");
    run->add_option("--out", out, "report output path");
    run->add_option("--format", format, "report format: json or csv");
    run->add_option("--jobs", jobs, "worker count");

    auto* paper = app.add_subcommand("paper-suite", "run the built-in identity suite");
    paper->add_option("--seed", seed, "override the suite seed");
    paper->add_option("--out", out, "report output path");
    paper->add_option("--format", format, "report format: json or csv");
    paper->add_option("--jobs", jobs, "worker count");

    auto* mem = app.add_subcommand("membership", "domain membership query");
    mem->add_option("--domain", domain_path, "domain JSON file")->required();
    mem->add_option("--point", point_path, "point JSON file")->required();

    auto* ap = app.add_subcommand("apply", "evaluate a map at a point");
    ap->add_option("--map", map_path, "map expression JSON file")->required();
    ap->add_option("--point", point_path, "point JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, seed, out, format, jobs);
    if (paper->parsed()) return cmd_paper_suite(seed, out, format, jobs);
    if (mem->parsed()) return cmd_membership(domain_path, point_path);
    return cmd_apply(map_path, point_path);
}
