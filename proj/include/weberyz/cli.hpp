#ifndef WEBERYZ_CLI_HPP
#define WEBERYZ_CLI_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weberyz/arith.hpp"
#include "weberyz/localdensity.hpp"

namespace weberyz {

/* Process exit codes of the command-line tool. */
enum ExitCode : int
{
    kExitMatch = 0,
    kExitMismatch = 1,
    kExitPrecision = 2,
    kExitUsage = 64
};

/* Per-class comparison for disc(D; s, A~): half the valuation of its rational norm against both routes. */
struct ClassReport
{
    int cls = 0;
    /* Reduced form (a, b, c) labelling the class. */
    i64 a = 0, b = 0, c = 0;
    std::string pairing;
    BigInt norm;
    FactorizationMap numeric;
    FactorizationMap predicted;
    FactorizationMap predicted_pairs;
    bool match = false;

    bool operator==(ClassReport const & o) const;
};

struct VerificationReport
{
    /* "verify-disc" or "verify-resultant". */
    std::string command;
    i64 D1 = 0, D2 = 0;
    int s = 1;
    std::optional<int> cls;
    /* Minimal polynomials, ascending degree. */
    std::vector<std::vector<BigInt>> polynomials;
    /* Exact discriminant or resultant. */
    BigInt value;
    FactorizationMap numeric;
    FactorizationMap predicted;
    bool match = false;
    long precision_used = 0;
    std::vector<ClassReport> classes;
    /* Stage -> milliseconds. */
    std::map<std::string, double> timings;

    bool operator==(VerificationReport const & o) const;
};

struct SweepCase
{
    i64 D = 0;
    int s = 1;
    int h = 0;
    FactorizationMap numeric;
    FactorizationMap predicted;
    bool match = false;
    /* Main and ideal-pair routes agree for every non-trivial class and prime. */
    bool routes_agree = false;
    /* Constant coefficient of the minimal polynomial is +-1. */
    bool unit_constant = false;
    /* Every prime of the discriminant is at most |D|. */
    bool primes_bounded = false;
    long precision_used = 0;
    std::string error;

    bool ok() const { return error.empty() && match && routes_agree && unit_constant && primes_bounded; }
    bool operator==(SweepCase const & o) const;
};

struct SweepReport
{
    i64 dmin = 0, dmax = 0;
    std::vector<int> s_list;
    std::vector<SweepCase> cases;
    bool all_match = true;

    bool operator==(SweepReport const & o) const;
};

struct WhittakerReport
{
    LocalSetup setup;
    Rational m;
    int depth = 0;
    Reading reading = Reading::Verified;
    WhittakerSeries closed;
    QPoly closed_coefficients;
    QPoly oracle_coefficients;
    bool agree = false;
};

/* Raised for inputs outside the preconditions of a command (exit code 64). */
class UsageError : public DomainError
{
  public:
    using DomainError::DomainError;
};

/* Exact discriminant of the minimal polynomial against the predicted factorization; all classes unless cls is set. */
VerificationReport verify_disc(i64 D, int s, std::optional<int> cls, long prec);
/* Exact resultant of the minimal polynomials of D1 and D2 against the predicted map (compared up to sign). */
VerificationReport verify_resultant(i64 D1, i64 D2, int s, long prec);
/* Fundamental admissible D in [dmin, dmax] and every listed s; result order is independent of jobs. */
SweepReport run_sweep(i64 dmin, i64 dmax, std::vector<int> const & s_list, int jobs, long prec,
                      bool check_routes = true);
WhittakerReport run_whittaker(LocalSetup const & setup, Rational const & m, std::optional<int> depth,
                              Reading reading = Reading::Verified);

/* JSON text (two-space indent, trailing newline); every number is a decimal string. */
std::string to_json(VerificationReport const & r);
std::string to_json(SweepReport const & r);
std::string to_json(WhittakerReport const & r);
/* Error document for failed runs: {"error": kind, "message": ..., "precision_cap": ...}. */
std::string error_json(std::string const & kind, std::string const & message);

VerificationReport parse_verification_report(std::string const & text);
SweepReport parse_sweep_report(std::string const & text);

/* Parse "a", "-a" or "a/b" into a canonical rational; throws UsageError. */
Rational parse_rational(std::string const & text);

} // namespace weberyz

#endif
