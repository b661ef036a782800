#include "commands.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    using namespace coh::cli;
    CLI::App app{"Cohomology of Bianchi and related groups: dimensions, base change, scans, Hecke operators"};
    app.set_config("--config", "", "File of key=value lines mirroring the long flags");
    app.require_subcommand(1);

    RunConfig c;
    std::string range = "0";
    std::string format = "csv";
    app.add_option("--group", c.group, "Catalog key, e.g. bianchi:-7, helling:5, tetrahedral");
    app.add_option("--d", c.d, "Discriminant parameter of Q(sqrt d)")->allow_extra_args(false);
    app.add_option("--n", range, "Weight or weight range a..b");
    app.add_option("--x", c.x, "Prime bound for dim_{<=x}, or norm bound for scan");
    app.add_option("--qbound", c.qbound, "Coefficient prime bound for scan");
    app.add_option("--pi", c.pi, "Prime element a+b*w");
    app.add_option("--nl", c.nl, "Monic quadratic factor 1,c1,c0 cutting out the non-lifted space")->delimiter(',');
    app.add_option("--restrict", c.restrict_to, "Prime elements whose operator is restricted to that space");
    app.add_option("--output,-o", c.output, "Output file (default stdout)");
    app.add_option("--results", c.results, "Append-only scan results file, resumed when present");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", c.threads, "Worker threads")->envname("COH_THREADS")->check(CLI::PositiveNumber);

    for (const char* name : {"dim", "bc", "compare", "scan", "hecke"}) {
        auto* sub = app.add_subcommand(name);
        sub->fallthrough();
        sub->callback([&c, name] { c.command = name; });
    }
    app.get_subcommand("dim")->description("dim_{<=x} H^1(G, E_n) per weight with witness primes");
    app.get_subcommand("bc")->description("Base change dimension and cusp codimension for Q(sqrt d)");
    app.get_subcommand("compare")->description("Computed dimension against bc + codim, flagging gaps");
    app.get_subcommand("scan")->description("Trivial-coefficient scan over Gamma^0(p), d = -1");
    app.get_subcommand("hecke")->description("Characteristic polynomial of T_pi and non-lifted data");

    CLI11_PARSE(app, argc, argv);
    try {
        std::tie(c.n_lo, c.n_hi) = parse_range(range);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    c.format = format == "json" ? Format::Json : Format::Csv;
    return run(c);
}
