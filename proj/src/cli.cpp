#include "weberyz/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <thread>

#include <json.hpp>

#include "weberyz/classpoly.hpp"
#include "weberyz/predictions.hpp"

namespace weberyz {

using nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string num(i64 v)
{
    return std::to_string(v);
}

i64 parse_i64(ordered_json const & j)
{
    std::string const & s = j.get_ref<std::string const &>();
    size_t used = 0;
    i64 v = std::stol(s, &used);
    if (used != s.size())
        throw DomainError("report: malformed integer '" + s + "'");
    return v;
}

BigInt parse_big(ordered_json const & j)
{
    BigInt v;
    if (v.set_str(j.get<std::string>(), 10) != 0)
        throw DomainError("report: malformed integer");
    return v;
}

std::string format_ms(double ms)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
}

/* {"sign": "-1", "factors": [["3", "12"], ["31", "1/2"]]} in increasing prime order. */
ordered_json factorization_json(FactorizationMap const & f)
{
    ordered_json factors = ordered_json::array();
    for (auto const & [p, twice] : f.entries())
        factors.push_back({p.get_str(), rational_to_string(frac(twice, 2))});
    return ordered_json{{"sign", num(f.sign)}, {"factors", factors}};
}

FactorizationMap factorization_from(ordered_json const & j)
{
    FactorizationMap f;
    f.sign = static_cast<int>(parse_i64(j.at("sign")));
    for (auto const & e : j.at("factors"))
        f.add(parse_big(e.at(0)), parse_rational(e.at(1).get<std::string>()));
    return f;
}

ordered_json poly_json(std::vector<BigInt> const & c)
{
    ordered_json a = ordered_json::array();
    for (auto const & x : c)
        a.push_back(x.get_str());
    return a;
}

ordered_json qpoly_json(QPoly const & c)
{
    ordered_json a = ordered_json::array();
    for (auto const & x : c)
        a.push_back(rational_to_string(x));
    return a;
}

/* Half the exponents of a factorization: the valuation of one prime above each inert or ramified l. */
FactorizationMap halved(Factorization const & f)
{
    FactorizationMap m;
    m.sign = f.sign;
    for (auto const & [p, e] : f.exponents)
        m.add_twice(p, static_cast<i64>(e));
    return m;
}

bool primes_at_most(FactorizationMap const & f, i64 bound)
{
    return std::all_of(f.entries().begin(), f.entries().end(),
                       [&](auto const & kv) { return kv.first <= BigInt(bound); });
}

void require_s(int s)
{
    if (s <= 0 || 24 % s != 0)
        throw UsageError("s must be a positive divisor of 24");
}

void require_admissible(i64 D)
{
    if (!is_admissible(D))
        throw UsageError("D = " + num(D) + " is not admissible (need D < 0, D = 1 mod 8, 3 not dividing D)");
}

SweepCase sweep_case(i64 D, int s, long prec, bool check_routes)
{
    SweepCase out;
    out.D = D;
    out.s = s;
    try {
        PredictionContext ctx(D, D, s);
        out.h = ctx.G0().order();
        MinimalPolynomial mp = minimal_polynomial(D, s, prec);
        out.precision_used = mp.report.prec_used;
        out.unit_constant = abs(mp.poly.c.front()) == 1;
        if (mp.poly.degree() > 1)
            out.numeric = FactorizationMap::from(factorize(poly_discriminant(mp.poly)));
        out.predicted = predicted_disc(ctx, DiscRoute::Pairs);
        out.match = out.numeric.same_entries(out.predicted);
        out.primes_bounded = primes_at_most(out.numeric, -D);
        out.routes_agree = true;
        if (check_routes) {
            auto primes = primes_up_to(-D);
            for (int cls = 1; cls < ctx.G0().order() && out.routes_agree; ++cls)
                for (i64 ell : primes)
                    if (ord_disc_main(ctx, 0, cls, ell) != ord_disc_pairs(ctx, cls, ell)) {
                        out.routes_agree = false;
                        break;
                    }
        }
    } catch (PrecisionError const & e) {
        out.error = std::string("precision: ") + e.what();
    } catch (std::exception const & e) {
        out.error = e.what();
    }
    return out;
}

} // namespace

bool ClassReport::operator==(ClassReport const & o) const
{
    return cls == o.cls && a == o.a && b == o.b && c == o.c && pairing == o.pairing && norm == o.norm &&
           numeric == o.numeric && predicted == o.predicted && predicted_pairs == o.predicted_pairs &&
           match == o.match;
}

bool VerificationReport::operator==(VerificationReport const & o) const
{
    return command == o.command && D1 == o.D1 && D2 == o.D2 && s == o.s && cls == o.cls &&
           polynomials == o.polynomials && value == o.value && numeric == o.numeric && predicted == o.predicted &&
           match == o.match && precision_used == o.precision_used && classes == o.classes &&
           timings.size() == o.timings.size();
}

bool SweepCase::operator==(SweepCase const & o) const
{
    return D == o.D && s == o.s && h == o.h && numeric == o.numeric && predicted == o.predicted && match == o.match &&
           routes_agree == o.routes_agree && unit_constant == o.unit_constant && primes_bounded == o.primes_bounded &&
           precision_used == o.precision_used && error == o.error;
}

bool SweepReport::operator==(SweepReport const & o) const
{
    return dmin == o.dmin && dmax == o.dmax && s_list == o.s_list && cases == o.cases && all_match == o.all_match;
}

Rational parse_rational(std::string const & text)
{
    Rational r;
    if (text.empty() || r.set_str(text, 10) != 0 || r.get_den() == 0)
        throw UsageError("not a rational number: '" + text + "'");
    r.canonicalize();
    return r;
}

VerificationReport verify_disc(i64 D, int s, std::optional<int> cls, long prec)
{
    require_s(s);
    require_admissible(D);
    if (!is_fundamental(D))
        throw UsageError("verify-disc needs a fundamental discriminant");
    VerificationReport r;
    r.command = "verify-disc";
    r.D1 = r.D2 = D;
    r.s = s;
    r.cls = cls;

    auto t0 = Clock::now();
    PredictionContext ctx(D, D, s);
    ClassGroup const & G = ctx.G0();
    if (cls && (*cls <= 0 || *cls >= G.order()))
        throw UsageError("class index must lie in 1.." + num(G.order() - 1));
    r.timings["class_group"] = elapsed_ms(t0);

    t0 = Clock::now();
    MinimalPolynomial mp = minimal_polynomial(D, s, prec);
    r.polynomials.push_back(mp.poly.c);
    r.precision_used = mp.report.prec_used;
    r.timings["minimal_polynomial"] = elapsed_ms(t0);

    t0 = Clock::now();
    r.value = mp.poly.degree() > 1 ? poly_discriminant(mp.poly) : BigInt(1);
    r.numeric = FactorizationMap::from(factorize(r.value));
    r.timings["discriminant"] = elapsed_ms(t0);

    t0 = Clock::now();
    r.predicted = predicted_disc(ctx, DiscRoute::Pairs);
    r.timings["prediction"] = elapsed_ms(t0);
    r.match = r.numeric.same_entries(r.predicted);

    t0 = Clock::now();
    for (int c = 1; c < G.order(); ++c) {
        if (cls && c != *cls)
            continue;
        ClassReport cr;
        cr.cls = c;
        Form const & f = G.form(c);
        cr.a = f.a;
        cr.b = f.b;
        cr.c = f.c;
        DiscClass dc = disc_class_numeric(D, s, c, prec);
        r.precision_used = std::max(r.precision_used, dc.report.prec_used);
        cr.pairing = dc.pairing;
        cr.norm = dc.norm;
        cr.numeric = halved(factorize(dc.norm));
        cr.numeric.sign = 1;
        cr.predicted = predicted_disc_class(ctx, c, DiscRoute::Main);
        cr.predicted_pairs = predicted_disc_class(ctx, c, DiscRoute::Pairs);
        cr.match = cr.numeric.same_entries(cr.predicted) && cr.predicted_pairs.same_entries(cr.predicted);
        r.match = r.match && cr.match;
        r.classes.push_back(std::move(cr));
    }
    r.timings["per_class"] = elapsed_ms(t0);
    return r;
}

VerificationReport verify_resultant(i64 D1, i64 D2, int s, long prec)
{
    require_s(s);
    require_admissible(D1);
    require_admissible(D2);
    i64 prod = D1 * D2;
    if (!is_square(prod))
        throw UsageError("D1 D2 must be a square");
    VerificationReport r;
    r.command = "verify-resultant";
    r.D1 = D1;
    r.D2 = D2;
    r.s = s;

    auto t0 = Clock::now();
    PredictionContext ctx(D1, D2, s);
    if (ctx.t <= 1)
        throw UsageError("the resultant prediction needs t = t1 t2 > 1");
    for (i64 p : prime_divisors(ctx.t))
        if (kronecker(ctx.D0, p) == 1)
            throw UsageError("prime " + num(p) + " of t splits in Q(sqrt D0)");
    r.timings["class_group"] = elapsed_ms(t0);

    t0 = Clock::now();
    MinimalPolynomial p1 = minimal_polynomial(D1, s, prec);
    MinimalPolynomial p2 = minimal_polynomial(D2, s, prec);
    r.polynomials = {p1.poly.c, p2.poly.c};
    r.precision_used = std::max(p1.report.prec_used, p2.report.prec_used);
    r.timings["minimal_polynomial"] = elapsed_ms(t0);

    t0 = Clock::now();
    r.value = resultant(p1.poly, p2.poly);
    if (r.value == 0)
        throw DomainError("resultant vanishes: the polynomials share a root");
    r.numeric = FactorizationMap::from(factorize(r.value));
    r.timings["resultant"] = elapsed_ms(t0);

    t0 = Clock::now();
    r.predicted = predicted_resultant(ctx);
    r.timings["prediction"] = elapsed_ms(t0);
    r.match = r.numeric.same_entries(r.predicted);
    return r;
}

SweepReport run_sweep(i64 dmin, i64 dmax, std::vector<int> const & s_list, int jobs, long prec, bool check_routes)
{
    if (dmin > dmax)
        throw UsageError("sweep range is empty: dmin > dmax");
    if (dmax >= 0)
        throw UsageError("sweep range must be negative");
    if (jobs < 1)
        throw UsageError("--jobs must be at least 1");
    for (int s : s_list)
        require_s(s);
    SweepReport rep;
    rep.dmin = dmin;
    rep.dmax = dmax;
    rep.s_list = s_list;

    std::vector<std::pair<i64, int>> tasks;
    for (i64 D = dmax; D >= dmin; --D)
        if (is_admissible(D) && is_fundamental(D))
            for (int s : s_list)
                tasks.emplace_back(D, s);
    rep.cases.resize(tasks.size());

    /* Workers claim tasks from a shared counter and write into their own slot, so the order is fixed. */
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < tasks.size(); i = next++)
            rep.cases[i] = sweep_case(tasks[i].first, tasks[i].second, prec, check_routes);
    };
    int nthreads = static_cast<int>(std::min<size_t>(static_cast<size_t>(jobs), std::max<size_t>(tasks.size(), 1)));
    std::vector<std::thread> pool;
    for (int i = 1; i < nthreads; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto & th : pool)
        th.join();

    for (auto const & c : rep.cases)
        rep.all_match = rep.all_match && c.ok();
    return rep;
}

WhittakerReport run_whittaker(LocalSetup const & setup, Rational const & m, std::optional<int> depth, Reading reading)
{
    if (setup.p == 2 || setup.p < 2 || !is_prime(setup.p))
        throw UsageError("p must be an odd prime");
    if (setup.Delta == 0 || setup.kappa == 0)
        throw UsageError("Delta and kappa must be non-zero");
    if (depth && *depth < 0)
        throw UsageError("--depth must be non-negative");
    WhittakerReport r;
    r.setup = setup;
    r.m = m;
    r.reading = reading;
    r.depth = depth ? *depth : whittaker_default_depth(setup, m);
    r.closed = whittaker_closed(setup, m, reading);
    r.closed_coefficients = r.closed.expand(r.depth);
    r.oracle_coefficients = whittaker_oracle(setup, m, r.depth);
    r.agree = r.closed_coefficients == r.oracle_coefficients;
    return r;
}

std::string to_json(VerificationReport const & r)
{
    ordered_json inputs{{"D1", num(r.D1)}, {"D2", num(r.D2)}, {"s", num(r.s)}};
    inputs["class"] = r.cls ? ordered_json(num(*r.cls)) : ordered_json(nullptr);
    ordered_json polys = ordered_json::array();
    for (auto const & p : r.polynomials)
        polys.push_back(poly_json(p));
    ordered_json classes = ordered_json::array();
    for (auto const & c : r.classes)
        classes.push_back({{"class", num(c.cls)},
                           {"form", {num(c.a), num(c.b), num(c.c)}},
                           {"pairing", c.pairing},
                           {"norm", c.norm.get_str()},
                           {"numeric", factorization_json(c.numeric)},
                           {"predicted", factorization_json(c.predicted)},
                           {"predicted_pairs", factorization_json(c.predicted_pairs)},
                           {"match", c.match}});
    ordered_json timings = ordered_json::object();
    for (auto const & [stage, ms] : r.timings)
        timings[stage] = format_ms(ms);
    ordered_json j{{"command", r.command},
                   {"inputs", inputs},
                   {"polynomials", polys},
                   {"value", r.value.get_str()},
                   {"numeric", factorization_json(r.numeric)},
                   {"predicted", factorization_json(r.predicted)},
                   {"match", r.match},
                   {"precision_used", num(r.precision_used)},
                   {"classes", classes},
                   {"timings", timings}};
    return j.dump(2) + "\n";
}

VerificationReport parse_verification_report(std::string const & text)
{
    ordered_json j = ordered_json::parse(text);
    VerificationReport r;
    r.command = j.at("command").get<std::string>();
    auto const & in = j.at("inputs");
    r.D1 = parse_i64(in.at("D1"));
    r.D2 = parse_i64(in.at("D2"));
    r.s = static_cast<int>(parse_i64(in.at("s")));
    if (!in.at("class").is_null())
        r.cls = static_cast<int>(parse_i64(in.at("class")));
    for (auto const & p : j.at("polynomials")) {
        std::vector<BigInt> c;
        for (auto const & x : p)
            c.push_back(parse_big(x));
        r.polynomials.push_back(std::move(c));
    }
    r.value = parse_big(j.at("value"));
    r.numeric = factorization_from(j.at("numeric"));
    r.predicted = factorization_from(j.at("predicted"));
    r.match = j.at("match").get<bool>();
    r.precision_used = parse_i64(j.at("precision_used"));
    for (auto const & c : j.at("classes")) {
        ClassReport cr;
        cr.cls = static_cast<int>(parse_i64(c.at("class")));
        cr.a = parse_i64(c.at("form").at(0));
        cr.b = parse_i64(c.at("form").at(1));
        cr.c = parse_i64(c.at("form").at(2));
        cr.pairing = c.at("pairing").get<std::string>();
        cr.norm = parse_big(c.at("norm"));
        cr.numeric = factorization_from(c.at("numeric"));
        cr.predicted = factorization_from(c.at("predicted"));
        cr.predicted_pairs = factorization_from(c.at("predicted_pairs"));
        cr.match = c.at("match").get<bool>();
        r.classes.push_back(std::move(cr));
    }
    for (auto const & [stage, ms] : j.at("timings").items())
        r.timings[stage] = std::stod(ms.get<std::string>());
    return r;
}

std::string to_json(SweepReport const & r)
{
    ordered_json slist = ordered_json::array();
    for (int s : r.s_list)
        slist.push_back(num(s));
    ordered_json cases = ordered_json::array();
    for (auto const & c : r.cases)
        cases.push_back({{"D", num(c.D)},
                         {"s", num(c.s)},
                         {"h", num(c.h)},
                         {"numeric", factorization_json(c.numeric)},
                         {"predicted", factorization_json(c.predicted)},
                         {"match", c.match},
                         {"routes_agree", c.routes_agree},
                         {"unit_constant", c.unit_constant},
                         {"primes_bounded", c.primes_bounded},
                         {"precision_used", num(c.precision_used)},
                         {"error", c.error}});
    ordered_json j{{"command", "sweep"},
                   {"inputs", {{"dmin", num(r.dmin)}, {"dmax", num(r.dmax)}, {"s_list", slist}}},
                   {"case_count", num(static_cast<i64>(r.cases.size()))},
                   {"all_match", r.all_match},
                   {"cases", cases}};
    return j.dump(2) + "\n";
}

SweepReport parse_sweep_report(std::string const & text)
{
    ordered_json j = ordered_json::parse(text);
    SweepReport r;
    auto const & in = j.at("inputs");
    r.dmin = parse_i64(in.at("dmin"));
    r.dmax = parse_i64(in.at("dmax"));
    for (auto const & s : in.at("s_list"))
        r.s_list.push_back(static_cast<int>(parse_i64(s)));
    r.all_match = j.at("all_match").get<bool>();
    for (auto const & c : j.at("cases")) {
        SweepCase sc;
        sc.D = parse_i64(c.at("D"));
        sc.s = static_cast<int>(parse_i64(c.at("s")));
        sc.h = static_cast<int>(parse_i64(c.at("h")));
        sc.numeric = factorization_from(c.at("numeric"));
        sc.predicted = factorization_from(c.at("predicted"));
        sc.match = c.at("match").get<bool>();
        sc.routes_agree = c.at("routes_agree").get<bool>();
        sc.unit_constant = c.at("unit_constant").get<bool>();
        sc.primes_bounded = c.at("primes_bounded").get<bool>();
        sc.precision_used = parse_i64(c.at("precision_used"));
        sc.error = c.at("error").get<std::string>();
        r.cases.push_back(std::move(sc));
    }
    if (parse_i64(j.at("case_count")) != static_cast<i64>(r.cases.size()))
        throw DomainError("report: case_count does not match the case list");
    return r;
}

std::string to_json(WhittakerReport const & r)
{
    ordered_json inputs{{"p", num(r.setup.p)},
                        {"Delta", num(r.setup.Delta)},
                        {"kappa", num(r.setup.kappa)},
                        {"m", rational_to_string(r.m)},
                        {"mu1", rational_to_string(r.setup.mu1)},
                        {"mu2", rational_to_string(r.setup.mu2)},
                        {"depth", num(r.depth)},
                        {"reading", r.reading == Reading::Verified ? "verified" : "as-printed"}};
    ordered_json closed{{"case", r.closed.source},
                        {"half_exponent", num(r.closed.half_exp)},
                        {"numerator", qpoly_json(r.closed.num)},
                        {"denominator", qpoly_json(r.closed.den)},
                        {"coefficients", qpoly_json(r.closed_coefficients)}};
    ordered_json j{{"command", "whittaker"},
                   {"inputs", inputs},
                   {"closed_form", closed},
                   {"oracle", {{"coefficients", qpoly_json(r.oracle_coefficients)}}},
                   {"agree", r.agree}};
    return j.dump(2) + "\n";
}

std::string error_json(std::string const & kind, std::string const & message)
{
    ordered_json j{{"error", kind}, {"message", message}, {"precision_cap", num(kPrecisionCap)}};
    return j.dump(2) + "\n";
}

} // namespace weberyz
