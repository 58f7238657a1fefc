/*
 * weber-yz: verify factorizations of discriminants and resultants of Weber
 * class polynomials against their predicted valuations.
 */

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weberyz/classpoly.hpp"
#include "weberyz/cli.hpp"

using namespace weberyz;

namespace {

std::string exponents_line(FactorizationMap const & f)
{
    return f.entries().empty() ? "{}" : f.to_string();
}

void print_text(VerificationReport const & r)
{
    std::cout << r.command << "  D1=" << r.D1 << "  D2=" << r.D2 << "  s=" << r.s << "\n";
    for (size_t i = 0; i < r.polynomials.size(); ++i) {
        std::cout << "  P" << i + 1 << " (ascending):";
        for (auto const & c : r.polynomials[i])
            std::cout << " " << c.get_str();
        std::cout << "\n";
    }
    std::cout << "  value      " << r.value.get_str() << "\n";
    std::cout << "  numeric    " << r.numeric.to_string() << "\n";
    std::cout << "  predicted  " << exponents_line(r.predicted) << "\n";
    for (auto const & c : r.classes)
        std::cout << "  class " << c.cls << " (" << c.a << "," << c.b << "," << c.c << ")  numeric "
                  << exponents_line(c.numeric) << "  predicted " << exponents_line(c.predicted) << "  "
                  << (c.match ? "ok" : "MISMATCH") << "\n";
    std::cout << "  precision  " << r.precision_used << " bits\n";
    std::cout << "  match      " << (r.match ? "true" : "false") << "\n";
}

void print_text(SweepReport const & r)
{
    int bad = 0;
    for (auto const & c : r.cases)
        if (!c.ok()) {
            ++bad;
            std::cout << "FAIL D=" << c.D << " s=" << c.s << " numeric " << c.numeric.to_string() << " predicted "
                      << exponents_line(c.predicted) << (c.error.empty() ? "" : "  error: " + c.error) << "\n";
        }
    std::cout << "sweep " << r.dmin << ".." << r.dmax << ": " << r.cases.size() << " cases, " << bad
              << " failing\n";
}

void print_text(WhittakerReport const & r)
{
    std::cout << "closed form [" << r.closed.source << "]  p^(" << r.closed.half_exp << "/2) ("
              << qpoly_to_string(r.closed.num) << ") / (" << qpoly_to_string(r.closed.den) << ")\n";
    std::cout << "closed coefficients:";
    for (auto const & c : r.closed_coefficients)
        std::cout << " " << c.get_str();
    std::cout << "\noracle coefficients:";
    for (auto const & c : r.oracle_coefficients)
        std::cout << " " << c.get_str();
    std::cout << "\nagree " << (r.agree ? "true" : "false") << "\n";
}

std::vector<int> parse_s_list(std::string const & text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(static_cast<int>(std::stol(item)));
    return out;
}

/* Accept the single-dash spellings -D1/-D2 alongside --D1/--D2. */
std::vector<std::string> normalize_args(int argc, char ** argv)
{
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) {
        std::string a = argv[i];
        if (a == "-D1" || a == "-D2")
            a = "-" + a;
        args.push_back(a);
    }
    return args; /* CLI11 consumes the vector in reverse order */
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Verify predicted factorizations of Weber class polynomial discriminants and resultants"};
    app.name("weber-yz");
    app.require_subcommand(1);

    long prec = default_precision();
    bool json = false;

    long D = 0, D1 = 0, D2 = 0;
    int s = 1;
    std::optional<int> cls;

    auto * disc = app.add_subcommand("verify-disc", "Exact discriminant against predicted valuations");
    disc->add_option("-D", D, "Fundamental admissible discriminant")->required();
    disc->add_option("-s", s, "Divisor of 24")->capture_default_str();
    disc->add_option("class", cls, "Restrict the per-class check to this class index");
    disc->add_option("--prec", prec, "Starting precision in bits")->check(CLI::Range(64L, kPrecisionCap));
    disc->add_flag("--json", json, "Emit a JSON report");

    auto * res = app.add_subcommand("verify-resultant", "Exact resultant against predicted valuations");
    res->add_option("--D1", D1, "First discriminant")->required();
    res->add_option("--D2", D2, "Second discriminant")->required();
    res->add_option("-s", s, "Divisor of 24")->capture_default_str();
    res->add_option("--prec", prec, "Starting precision in bits")->check(CLI::Range(64L, kPrecisionCap));
    res->add_flag("--json", json, "Emit a JSON report");

    long dmin = -400, dmax = -1;
    std::string s_list = "1,2,3,4,6,8,12,24";
    int jobs = 1;
    bool no_routes = false;
    auto * sweep = app.add_subcommand("sweep", "Check every fundamental admissible D in a range");
    sweep->add_option("--dmin", dmin, "Lower end of the range")->capture_default_str();
    sweep->add_option("--dmax", dmax, "Upper end of the range")->capture_default_str();
    sweep->add_option("--s-list", s_list, "Comma-separated divisors of 24")->capture_default_str();
    sweep->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
    sweep->add_flag("--no-routes", no_routes, "Skip the per-class route comparison");
    sweep->add_option("--prec", prec, "Starting precision in bits")->check(CLI::Range(64L, kPrecisionCap));
    sweep->add_flag("--json", json, "Emit a JSON report");

    long p = 3, Delta = 1, kappa = 1;
    std::string m = "1", mu1 = "0", mu2 = "0";
    std::optional<int> depth;
    bool as_printed = false;
    auto * whit = app.add_subcommand("whittaker", "Closed-form local Whittaker series against the exact oracle");
    whit->add_option("p", p, "Odd prime")->required();
    whit->add_option("Delta", Delta, "O_Delta = Z_p + sqrt(Delta) Z_p")->required();
    whit->add_option("kappa", kappa, "Scale of the norm form")->required();
    whit->add_option("m", m, "Represented value (rational, e.g. 1/3)")->required();
    whit->add_option("mu1", mu1, "Coset coordinate 1 (rational)")->required();
    whit->add_option("mu2", mu2, "Coset coordinate 2 (rational)")->required();
    whit->add_option("--depth", depth, "Number of series coefficients compared");
    whit->add_flag("--as-printed", as_printed, "Use the formulas exactly as printed");
    whit->add_flag("--json", json, "Emit a JSON report");

    try {
        app.parse(normalize_args(argc, argv));
    } catch (CLI::ParseError const & e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*disc || *res) {
            VerificationReport r = *disc ? verify_disc(D, s, cls, prec) : verify_resultant(D1, D2, s, prec);
            if (json)
                std::cout << to_json(r);
            else
                print_text(r);
            return r.match ? kExitMatch : kExitMismatch;
        }
        if (*sweep) {
            SweepReport r = run_sweep(dmin, dmax, parse_s_list(s_list), jobs, prec, !no_routes);
            if (json)
                std::cout << to_json(r);
            else
                print_text(r);
            for (auto const & c : r.cases)
                if (c.error.rfind("precision", 0) == 0)
                    return kExitPrecision;
            return r.all_match ? kExitMatch : kExitMismatch;
        }
        LocalSetup setup{p, Delta, kappa, parse_rational(mu1), parse_rational(mu2)};
        WhittakerReport r = run_whittaker(setup, parse_rational(m), depth,
                                          as_printed ? Reading::AsPrinted : Reading::Verified);
        if (json)
            std::cout << to_json(r);
        else
            print_text(r);
        return r.agree ? kExitMatch : kExitMismatch;
    } catch (PrecisionError const & e) {
        std::cout << error_json("precision", e.what());
        return kExitPrecision;
    } catch (std::invalid_argument const & e) {
        /* UsageError and DomainError: inputs outside the preconditions */
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
}
